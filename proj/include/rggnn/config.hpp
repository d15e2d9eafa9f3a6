#ifndef RGGNN_CONFIG_HPP
#define RGGNN_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "rggnn/errors.hpp"

namespace rggnn {

/// Flat key-value configuration with [section] headers. Keys are addressed
/// as "section.key"; `#` starts a comment.
class Config {
public:
    static Config from_string(const std::string& text);
    static Config from_file(const std::string& path);

    bool has(const std::string& key) const;

    std::string get_str(const std::string& key) const;
    std::string get_str(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::vector<int> get_int_list(const std::string& key, std::vector<int> fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        std::vector<double> fallback) const;

    void set(const std::string& key, const std::string& value);

private:
    std::map<std::string, std::string> values_;
};

} // namespace rggnn

#endif // RGGNN_CONFIG_HPP
