#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace d3c {

/// Records what each simulated node reads. Disabled logs only count
/// violations.
class AccessLog {
public:
    enum class Kind { file, signal };

    struct Record {
        int node;
        Kind kind;
        std::string item;
        bool allowed;
    };

    explicit AccessLog(bool recording = false) : recording_(recording) {}

    void note(int node, Kind kind, const std::string& item, bool allowed) {
        if (!allowed) ++violations_;
        if (recording_ || !allowed) records_.push_back({node, kind, item, allowed});
    }

    bool recording() const noexcept { return recording_; }
    std::size_t violations() const noexcept { return violations_; }
    const std::vector<Record>& records() const noexcept { return records_; }

    std::size_t count(Kind kind) const {
        std::size_t n = 0;
        for (const auto& r : records_) n += r.kind == kind;
        return n;
    }

private:
    bool recording_;
    std::size_t violations_ = 0;
    std::vector<Record> records_;
};

} // namespace d3c
