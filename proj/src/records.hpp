#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace hetalign::detail {

/// Calls `fn(line_number, tokens)` for every non-blank, non-comment line of
/// `in`. Tokens are split on spaces and tabs; a trailing '\r' is dropped.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
    std::string line;
    std::vector<std::string_view> tokens;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        tokens.clear();
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) {
                ++pos;
            }
            std::size_t end = pos;
            while (end < line.size() && line[end] != ' ' && line[end] != '\t') {
                ++end;
            }
            if (end > pos) {
                tokens.emplace_back(line.data() + pos, end - pos);
            }
            pos = end;
        }
        if (tokens.empty() || tokens.front().front() == '#') {
            continue;
        }
        fn(line_no, tokens);
    }
}

bool parse_double(std::string_view token, double& out);
bool parse_unsigned(std::string_view token, unsigned long long& out);

}  // namespace hetalign::detail
