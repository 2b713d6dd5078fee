#include "fair/report.hpp"

#include <json.hpp>

#include <cstdio>

namespace fair {

void Report::add(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
}

void Report::add(const std::string& key, const char* value) {
    entries_.emplace_back(key, std::string(value));
}

void Report::add(const std::string& key, uint64_t value) {
    entries_.emplace_back(key, std::to_string(value));
}

void Report::add(const std::string& key, int value) {
    entries_.emplace_back(key, std::to_string(value));
}

void Report::add(const std::string& key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    entries_.emplace_back(key, buf);
}

void Report::add(const std::string& key, bool value) {
    entries_.emplace_back(key, value ? "true" : "false");
}

const std::string* Report::find(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return &v;
    return nullptr;
}

std::string Report::to_text() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += ": ";
        out += v;
        out += '\n';
    }
    return out;
}

std::string Report::to_json() const {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : entries_) j[k] = v;
    return j.dump(2) + "\n";
}

void Report::finalize_hash() {
    std::string text = to_text();
    Digest32 digest = hash32(reinterpret_cast<const uint8_t*>(text.data()),
                             text.size());
    add("determinism.hash", to_hex(digest.data(), digest.size()));
}

}  // namespace fair
