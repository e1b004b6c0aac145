#pragma once

#include "oversmooth/banach_scale.hpp"
#include "oversmooth/grid_function.hpp"

namespace oversmooth {

// Nonlinear forward map F defined on all grid functions, with the adjoint of its derivative.
class ForwardOperator {
public:
    virtual ~ForwardOperator() = default;

    virtual const ScaleOperator& op() const = 0;
    virtual GridFunction apply(const GridFunction& u) const = 0;
    // F'(u)^T w, given F(u) already evaluated at u.
    virtual GridFunction adjoint_derivative(const GridFunction& u, const GridFunction& fu,
                                            const GridFunction& w) const = 0;
};

} // namespace oversmooth
