#pragma once

#include <optional>
#include <string>
#include <vector>

#include "micov/spd.hpp"

namespace micov {

/// Hidden concept label of a single instance (synthetic ground truth only).
enum class ConceptLabel { Positive, Negative };

/// A subject's multiset of SPD instances plus the subject-level class label.
class Bag {
public:
    Bag(std::string subject_id, int label, std::vector<SpdMatrix> instances,
        std::optional<std::vector<ConceptLabel>> hidden_instance_labels = std::nullopt);

    const std::string& subject_id() const { return subject_id_; }
    int label() const { return label_; }
    const std::vector<SpdMatrix>& instances() const { return instances_; }
    const std::optional<std::vector<ConceptLabel>>& hidden_instance_labels() const {
        return hidden_instance_labels_;
    }

    std::size_t size() const { return instances_.size(); }
    Eigen::Index dim() const { return instances_.front().dim(); }

private:
    std::string subject_id_;
    int label_;
    std::vector<SpdMatrix> instances_;
    std::optional<std::vector<ConceptLabel>> hidden_instance_labels_;
};

} // namespace micov
