#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace pscb::testing {

// Minimal well-formedness check: balanced, properly nested tags with quoted attributes, a single
// root element, and no stray '<' or unescaped '&' in text. Returns an empty string on success.
inline std::string xml_problem(std::string_view doc) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    int roots = 0;
    auto entity_ok = [&](std::size_t at) {
        for (std::string_view e : {"&amp;", "&lt;", "&gt;", "&quot;", "&apos;"}) {
            if (doc.substr(at, e.size()) == e) return true;
        }
        return false;
    };
    while (i < doc.size()) {
        const char c = doc[i];
        if (c == '&') {
            if (!entity_ok(i)) return "bad entity at " + std::to_string(i);
            ++i;
            continue;
        }
        if (c != '<') {
            if (stack.empty() && c != ' ' && c != '\n' && c != '\r' && c != '\t') {
                return "text outside the root element at " + std::to_string(i);
            }
            ++i;
            continue;
        }
        if (doc.substr(i, 5) == "<?xml") {
            if (i != 0) return "misplaced XML declaration";
            const auto end = doc.find("?>", i);
            if (end == std::string_view::npos) return "unterminated declaration";
            i = end + 2;
            continue;
        }
        if (doc.substr(i, 4) == "<!--") {
            const auto end = doc.find("-->", i);
            if (end == std::string_view::npos) return "unterminated comment";
            i = end + 3;
            continue;
        }
        const bool closing = i + 1 < doc.size() && doc[i + 1] == '/';
        std::size_t j = i + (closing ? 2 : 1);
        const std::size_t name_start = j;
        while (j < doc.size() && (std::isalnum(static_cast<unsigned char>(doc[j])) || doc[j] == ':' || doc[j] == '-' || doc[j] == '_')) ++j;
        if (j == name_start) return "empty tag name at " + std::to_string(i);
        const std::string name(doc.substr(name_start, j - name_start));
        bool self_closing = false;
        while (true) {
            if (j >= doc.size()) return "unterminated tag " + name;
            const char d = doc[j];
            if (d == '"' || d == '\'') {
                const auto end = doc.find(d, j + 1);
                if (end == std::string_view::npos) return "unterminated attribute in " + name;
                const auto value = doc.substr(j + 1, end - j - 1);
                if (value.find('<') != std::string_view::npos) return "'<' inside attribute of " + name;
                j = end + 1;
            } else if (d == '/' && j + 1 < doc.size() && doc[j + 1] == '>') {
                self_closing = true;
                j += 2;
                break;
            } else if (d == '>') {
                ++j;
                break;
            } else if (d == '<') {
                return "'<' inside tag " + name;
            } else {
                ++j;
            }
        }
        if (closing) {
            if (stack.empty() || stack.back() != name) return "mismatched closing tag " + name;
            stack.pop_back();
        } else {
            if (stack.empty()) ++roots;
            if (!self_closing) stack.push_back(name);
        }
        i = j;
    }
    if (!stack.empty()) return "unclosed element " + stack.back();
    if (roots != 1) return "expected one root element, found " + std::to_string(roots);
    return {};
}

}  // namespace pscb::testing
