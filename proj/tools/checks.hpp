#pragma once

#include <string>

namespace sobolev::cli {

struct CheckOptions {
  std::string filter;          // substring filter on property names
  bool inject_sign_bug = false;  // mutation canary: broken Laplacian copy
};

// Runs the invariant suites (chain rule, Laplacian-Hessian identity, Hodge,
// half-Laplacian, Brezis-Lieb), printing one pass/fail line per property.
// Returns the number of failures.
int run_checks(const CheckOptions& opts);

}  // namespace sobolev::cli
