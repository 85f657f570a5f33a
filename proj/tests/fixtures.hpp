#pragma once

#include "pathcert/dsl.hpp"

#include <string>

namespace testing_support {

inline std::string fixture_path(const std::string& name) { return std::string(PATHCERT_FIXTURES) + "/" + name; }

inline pathcert::Document load(const std::string& name) {
    return pathcert::parse_document(pathcert::read_file(fixture_path(name)));
}

}  // namespace testing_support

namespace testing_support {

/// Z(x_1 ... x_m) as a finite path.
inline pathcert::FinitePath prefix_cylinder(const pathcert::InfinitePath& x, std::size_t m) {
    return pathcert::FinitePath{x.range(), x.head(m)};
}

}  // namespace testing_support
