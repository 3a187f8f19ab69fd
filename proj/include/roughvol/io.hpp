#pragma once

#include <string>
#include <vector>

namespace roughvol {

// fixed-format float printing: 17 significant digits round-trip exactly (JSON),
// 12 keep CSV readable; identical inputs always produce identical bytes
std::string format_double(double x, int significant_digits);

std::string json_escape(const std::string& s);

// Minimal ordered JSON emitter. Keys are written in call order, numbers with a
// fixed digit count, so equal inputs serialize to identical bytes.
class JsonWriter {
public:
    explicit JsonWriter(int significant_digits = 17) : digits_(significant_digits) {}

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& name);
    JsonWriter& value(double v);
    JsonWriter& value(long v);
    JsonWriter& value(int v) { return value(static_cast<long>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v) { return value(std::string(v)); }

    const std::string& str() const { return out_; }

private:
    void comma();
    std::string out_;
    std::vector<bool> first_in_scope_;
    bool after_key_ = false;
    int digits_;
};

std::string csv_join(const std::vector<std::string>& cells);

} // namespace roughvol
