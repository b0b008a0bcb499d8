#pragma once

#include "bspf/grid.hpp"

#include <span>
#include <vector>

namespace bspf {

/// Surface elevation eta (m) and discharge fluxes M (x) and N (y) in m^2/s,
/// all on the same (Ny x Nx) tensor grid.
struct SweState {
    Field2D eta;
    Field2D mm;
    Field2D nn;
};

struct SweParams {
    double gravity = 9.81;
    double manning_alpha = 0.025;
};

SweState make_swe_state(const Grid& gx, const Grid& gy);

/// Packs (eta, M, N) row-major into one vector of length 3 Nx Ny and back.
std::vector<double> flatten(const SweState& s);
SweState unflatten(const Grid& gx, const Grid& gy, std::span<const double> v);

/// Sum of eta * w_x * w_y with trapezoidal weights.
double total_volume(const Field2D& eta);

/// Throws drying if h + eta <= 0 anywhere; returns min(h + eta).
double check_depth(const RowMatrix& h, const RowMatrix& eta);

}  // namespace bspf
