#pragma once

#include "hegl/grid.hpp"

namespace hegl {

// Centered second-order stencil operators on the ghost-padded grid.
// Every operator writes interior cells only; callers apply the appropriate
// ghost rule before feeding a result into another operator. Inputs must have
// their ghosts filled.

void grad(const Grid& g, const Field& f, Vec3Field& out, Exec ex = default_exec());
void div(const Grid& g, const Vec3Field& v, Field& out, Exec ex = default_exec());
void curl(const Grid& g, const Vec3Field& v, Vec3Field& out, Exec ex = default_exec());
void lap(const Grid& g, const Field& f, Field& out, Exec ex = default_exec());
void lap_vec(const Grid& g, const Vec3Field& v, Vec3Field& out, Exec ex = default_exec());

// Flux-form div(coeff * grad f) with arithmetic face averaging of the
// coefficient; reduces to lap(f) when coeff == 1.
void div_coeff_grad(const Grid& g, const Field& coeff, const Field& f, Field& out,
                    Exec ex = default_exec());

// Divergence of a symmetric tensor field, componentwise:
// out_c = sum_d d_d M(d, c). M must be assembled at every cell (ghosts too).
void div_sym_tensor(const Grid& g, const SymTensorField& m, Vec3Field& out,
                    Exec ex = default_exec());

// Assemble a (x) a at every cell.
void outer_product(const Grid& g, const Vec3Field& a, SymTensorField& out,
                   Exec ex = default_exec());

// div(a (x) a); `a` needs valid ghosts (gradient-type fields use
// VecRule::free_normal).
void div_outer(const Grid& g, const Vec3Field& a, Vec3Field& out, Exec ex = default_exec());

// vel . grad f (advection of a scalar); interior only.
void convect(const Grid& g, const Vec3Field& vel, const Field& f, Field& out,
             Exec ex = default_exec());
// (vel . grad) v, componentwise.
void convect_vec(const Grid& g, const Vec3Field& vel, const Vec3Field& v, Vec3Field& out,
                 Exec ex = default_exec());

// Full contraction grad(v) : M at interior cells (M symmetric, v ghost-filled).
void gradv_contract(const Grid& g, const Vec3Field& v, const SymTensorField& m, Field& out,
                    Exec ex = default_exec());

}  // namespace hegl
