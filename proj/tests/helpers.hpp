#pragma once

#include "gwalk/types.hpp"

#include <initializer_list>

namespace testutil {

inline gwalk::Mat4 mat4(std::initializer_list<double> rowmajor) {
  gwalk::Mat4 m;
  int i = 0;
  for (double v : rowmajor) {
    m(i / 4, i % 4) = v;
    ++i;
  }
  return m;
}

template <class A, class B>
double maxdiff(const A &a, const B &b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testutil
