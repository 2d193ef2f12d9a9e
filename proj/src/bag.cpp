#include "micov/bag.hpp"

#include <stdexcept>

namespace micov {

Bag::Bag(std::string subject_id, int label, std::vector<SpdMatrix> instances,
         std::optional<std::vector<ConceptLabel>> hidden_instance_labels)
    : subject_id_(std::move(subject_id)),
      label_(label),
      instances_(std::move(instances)),
      hidden_instance_labels_(std::move(hidden_instance_labels)) {
    if (label_ != 1 && label_ != -1) {
        throw std::invalid_argument("Bag: label must be +1 or -1");
    }
    if (instances_.empty()) {
        throw std::invalid_argument("Bag: instance list must be nonempty");
    }
    const Eigen::Index d = instances_.front().dim();
    for (const SpdMatrix& c : instances_) {
        if (c.dim() != d) {
            throw std::invalid_argument("Bag: instances have mixed dimensions");
        }
    }
    if (hidden_instance_labels_ && hidden_instance_labels_->size() != instances_.size()) {
        throw std::invalid_argument("Bag: hidden label count does not match instance count");
    }
}

} // namespace micov
