#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace splitkit {

/// Ordered set of leg colors. An optional signature splits the labels into
/// "top" (i+) and "bottom" (i-) parts, as used by the top-substantial category.
class ColorSet {
public:
    ColorSet() = default;
    explicit ColorSet(std::vector<std::string> labels,
                      std::vector<std::string> top = {},
                      std::vector<std::string> bottom = {})
        : labels_(std::move(labels)), top_(std::move(top)), bottom_(std::move(bottom)) {
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (!index_.emplace(labels_[i], static_cast<int>(i)).second)
                throw std::invalid_argument("duplicate color label: " + labels_[i]);
        }
        if (!top_.empty() || !bottom_.empty()) {
            std::vector<bool> seen(labels_.size(), false);
            for (const auto& part : {top_, bottom_})
                for (const auto& l : part) {
                    int i = index_of(l);
                    if (i < 0) throw std::invalid_argument("signature label not in set: " + l);
                    if (seen[i]) throw std::invalid_argument("label in both signature parts: " + l);
                    seen[i] = true;
                }
            for (std::size_t i = 0; i < labels_.size(); ++i)
                if (!seen[i])
                    throw std::invalid_argument("label missing from signature: " + labels_[i]);
        }
    }

    /// {1+,...,g+} ∪ {1-,...,f-} with the top/bottom signature.
    static ColorSet top_bottom(int g, int f) {
        std::vector<std::string> labels, top, bottom;
        for (int i = 1; i <= g; ++i) {
            labels.push_back(std::to_string(i) + "+");
            top.push_back(labels.back());
        }
        for (int i = 1; i <= f; ++i) {
            labels.push_back(std::to_string(i) + "-");
            bottom.push_back(labels.back());
        }
        return ColorSet(std::move(labels), std::move(top), std::move(bottom));
    }

    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<std::string>& top() const { return top_; }
    const std::vector<std::string>& bottom() const { return bottom_; }
    bool has_signature() const { return !top_.empty() || !bottom_.empty(); }
    std::size_t size() const { return labels_.size(); }

    int index_of(const std::string& label) const {
        auto it = index_.find(label);
        return it == index_.end() ? -1 : it->second;
    }
    int require(const std::string& label) const {
        int i = index_of(label);
        if (i < 0) throw std::domain_error("color not in set: " + label);
        return i;
    }
    const std::string& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }

    bool operator==(const ColorSet& o) const {
        return labels_ == o.labels_ && top_ == o.top_ && bottom_ == o.bottom_;
    }
    bool operator!=(const ColorSet& o) const { return !(*this == o); }

private:
    std::vector<std::string> labels_;
    std::vector<std::string> top_, bottom_;
    std::unordered_map<std::string, int> index_;
};

}  // namespace splitkit
