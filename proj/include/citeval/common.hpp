#pragma once
// Shared vocabulary types and error classes.

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace citeval {

// Raised for malformed or inconsistent input (files, configs, arguments).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a computation's preconditions fail on otherwise valid data.
class ComputeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DocType { article, review, letter, other };

std::string_view to_string(DocType t);
// Unknown names yield `other`; `known` is cleared in that case.
DocType parse_doc_type(std::string_view name, bool* known = nullptr);

using DocTypeFilter = std::set<DocType>;

inline DocTypeFilter all_doc_types() {
    return {DocType::article, DocType::review, DocType::letter, DocType::other};
}

enum class CountingMode { whole, fractional };

std::string_view to_string(CountingMode m);
CountingMode parse_counting_mode(std::string_view name);

// Inclusive range of publication years.
struct YearRange {
    int first = 0;
    int last = 0;

    bool contains(int year) const { return year >= first && year <= last; }
    bool operator==(const YearRange&) const = default;
};

// Accepts "2009" or "2007-2008".
YearRange parse_year_range(std::string_view text);
std::string to_string(const YearRange& r);

}  // namespace citeval
