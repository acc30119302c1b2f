#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include "fopa/core/execution.hpp"

namespace fopa {

/// Calls body(i) for i in [0, n). In parallel mode the calls are spread over OpenMP threads; the
/// first exception by index (not by time) is rethrown after all calls finish, so failures are
/// reported the same way in both modes.
template <class Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace fopa
