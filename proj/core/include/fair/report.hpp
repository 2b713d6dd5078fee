#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fair/crypto.hpp"

namespace fair {

// Ordered key/value output with one stable `key: value` line per entry;
// nesting goes through dotted keys. Kept deterministic so identical runs
// serialize byte-identically.
class Report {
public:
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, const char* value);
    void add(const std::string& key, uint64_t value);
    void add(const std::string& key, int value);
    void add(const std::string& key, double value);  // fixed 6 decimals
    void add(const std::string& key, bool value);

    const std::string* find(const std::string& key) const;

    std::string to_text() const;
    std::string to_json() const;

    // Appends determinism.hash over everything added so far.
    void finalize_hash();

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace fair
