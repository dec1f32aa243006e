#pragma once

#include "doctest.h"
#include "triplewell/real.hpp"

#include <string>

namespace twtest {

using triplewell::Real;

inline Real ten_to(long k) {
    return pow(Real(10), k);
}

inline Real rel_error(const Real& got, const Real& want) {
    Real diff = abs(got - want);
    Real scale = abs(want);
    if (scale == 0)
        return diff;
    return Real(diff / scale);
}

inline void check_close(const Real& got, const Real& want, const Real& tol,
                        const std::string& what) {
    Real err = rel_error(got, want);
    INFO(what << ": got " << got.str(25) << ", want " << want.str(25) << ", rel err "
              << err.str(3));
    CHECK(err <= tol);
}

inline void check_small(const Real& got, const Real& tol, const std::string& what) {
    Real mag = abs(got);
    INFO(what << ": |value| = " << mag.str(3) << ", tol " << tol.str(3));
    CHECK(mag <= tol);
}

}  // namespace twtest
