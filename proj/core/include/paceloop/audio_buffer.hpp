#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "paceloop/error.hpp"

namespace paceloop {

// Sample store with absolute indexing. The stream head keeps appending while
// audio older than any open candidate segment can be dropped, so memory stays
// bounded on long sessions.
class AudioBuffer {
public:
    void append(std::span<const float> samples) {
        data_.insert(data_.end(), samples.begin(), samples.end());
    }

    std::int64_t first() const { return offset_; }
    std::int64_t end() const { return offset_ + static_cast<std::int64_t>(data_.size()); }

    std::vector<float> slice(std::int64_t begin, std::int64_t count) const {
        if (count < 0 || begin < offset_ || begin + count > end()) {
            fail("bounds-outside-buffer",
                 "requested samples [" + std::to_string(begin) + ", " +
                     std::to_string(begin + count) + ") outside buffered [" +
                     std::to_string(offset_) + ", " + std::to_string(end()) + ")");
        }
        const auto local = static_cast<std::size_t>(begin - offset_);
        return std::vector<float>(data_.begin() + local,
                                  data_.begin() + local + static_cast<std::size_t>(count));
    }

    void trim_before(std::int64_t keep_from) {
        if (keep_from <= offset_) {
            return;
        }
        if (keep_from >= end()) {
            offset_ = end();
            data_.clear();
            return;
        }
        const auto drop = static_cast<std::size_t>(keep_from - offset_);
        data_.erase(data_.begin(), data_.begin() + drop);
        offset_ = keep_from;
    }

private:
    std::vector<float> data_;
    std::int64_t offset_ = 0;
};

}  // namespace paceloop
