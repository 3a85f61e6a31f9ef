// SPDX-License-Identifier: Apache-2.0
#include "spp/pattern.hpp"

#include <algorithm>
#include <sstream>

namespace spp {

std::string format_pattern(const Pattern& pattern) {
    std::ostringstream out;
    if (pattern.kind == StructureKind::itemset) {
        out << '{';
        for (std::size_t i = 0; i < pattern.elements.size(); ++i) {
            if (i) out << ',';
            out << pattern.elements[i];
        }
        out << '}';
    } else {
        for (std::size_t i = 0; i < pattern.elements.size(); ++i) {
            if (i) out << "->";
            out << pattern.elements[i];
        }
    }
    return out.str();
}

namespace {

int32_t parse_id(const std::string& text) {
    std::size_t used = 0;
    long value = std::stol(text, &used);
    if (used != text.size() || value < 0) throw std::invalid_argument(text);
    return static_cast<int32_t>(value);
}

}  // namespace

Pattern parse_pattern(const std::string& text, StructureKind kind) {
    Pattern p;
    p.kind = kind;
    try {
        if (kind == StructureKind::itemset) {
            if (text.size() < 2 || text.front() != '{' || text.back() != '}')
                throw std::invalid_argument(text);
            std::string body = text.substr(1, text.size() - 2);
            std::istringstream in(body);
            std::string part;
            while (std::getline(in, part, ',')) p.elements.push_back(parse_id(part));
            if (!std::is_sorted(p.elements.begin(), p.elements.end()) ||
                std::adjacent_find(p.elements.begin(), p.elements.end()) != p.elements.end())
                throw std::invalid_argument(text);
        } else {
            if (text.empty()) return p;
            std::size_t pos = 0;
            while (true) {
                std::size_t arrow = text.find("->", pos);
                std::string part =
                    arrow == std::string::npos ? text.substr(pos) : text.substr(pos, arrow - pos);
                p.elements.push_back(parse_id(part));
                if (arrow == std::string::npos) break;
                pos = arrow + 2;
            }
        }
    } catch (const std::exception&) {
        throw DatasetError("malformed pattern text '" + text + "'");
    }
    return p;
}

bool occurs(const Pattern& pattern, const Instance& instance) {
    const auto& p = pattern.elements;
    const auto& s = instance.elements;
    if (p.empty()) return true;
    if (pattern.kind == StructureKind::itemset) {
        // both sides strictly increasing: linear merge
        std::size_t i = 0;
        for (int32_t need : p) {
            while (i < s.size() && s[i] < need) ++i;
            if (i == s.size() || s[i] != need) return false;
            ++i;
        }
        return true;
    }
    // greedy subsequence scan
    std::size_t k = 0;
    for (int32_t tok : s) {
        if (tok == p[k] && ++k == p.size()) return true;
    }
    return false;
}

std::vector<int32_t> support_of(const Pattern& pattern, const Dataset& data) {
    std::vector<int32_t> rows;
    for (std::size_t i = 0; i < data.instances.size(); ++i)
        if (occurs(pattern, data.instances[i])) rows.push_back(static_cast<int32_t>(i));
    return rows;
}

}  // namespace spp
