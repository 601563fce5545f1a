// Finite-difference plate solvers.

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "micropump/error.hpp"
#include "micropump/plate_mechanics.hpp"

namespace micropump::plate {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kPi = std::numbers::pi;
constexpr double kRefinementTolerance = 0.02;

Eigen::VectorXd solve_sparse(const SparseMatrix& a, const Eigen::VectorXd& b, bool symmetric) {
    if (symmetric) {
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(a);
        if (ldlt.info() == Eigen::Success) {
            Eigen::VectorXd x = ldlt.solve(b);
            if (ldlt.info() == Eigen::Success) return x;
        }
    }
    Eigen::SparseLU<SparseMatrix> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success) {
        throw Error(ErrorKind::solver, "plate system is singular: " + lu.lastErrorMessage());
    }
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw Error(ErrorKind::solver, "plate solve failed");
    return x;
}

void require_load(const LoadPatch& load, double in_radius) {
    if (!(load.total_force >= 0.0)) throw Error(ErrorKind::invalid_input, "load total_force must be >= 0");
    if (load.kind == LoadKind::central_disc) {
        if (!(load.radius > 0.0)) throw Error(ErrorKind::invalid_input, "disc load radius must be > 0");
        if (load.radius > in_radius) throw Error(ErrorKind::geometry, "disc load extends beyond the plate");
    }
}

double relative_change(double coarse, double fine) {
    if (fine == 0.0) return coarse == 0.0 ? 0.0 : 1.0;
    return std::abs(fine - coarse) / std::abs(fine);
}

}  // namespace

RadialProfile solve_circular_plate(double plate_radius, const LoadPatch& load, double rigidity, int n_nodes) {
    if (n_nodes < 64) throw Error(ErrorKind::invalid_input, "circular plate solver needs n_nodes >= 64");
    if (!(plate_radius > 0.0)) throw Error(ErrorKind::invalid_input, "plate radius must be > 0");
    if (!(rigidity > 0.0)) throw Error(ErrorKind::invalid_input, "flexural rigidity must be > 0");
    require_load(load, plate_radius);

    const int n = n_nodes;
    const int m = n - 1;  // unknowns w_0 … w_{n-2}; w_{n-1} = 0 at the rim
    const double h = plate_radius / (n - 1);
    const double h2 = h * h;
    auto r_at = [h](double i) { return i * h; };

    // Lw: w (m unknowns) -> v = ∇²w at nodes 0 … n−1, ghost w_n = w_{n−2}.
    std::vector<Triplet> lw;
    lw.reserve(3 * static_cast<std::size_t>(n));
    auto add_w = [&](int row, int col, double value) {
        if (col < m) lw.emplace_back(row, col, value);
    };
    add_w(0, 0, -4.0 / h2);
    add_w(0, 1, 4.0 / h2);
    for (int i = 1; i <= n - 2; ++i) {
        const double rp = r_at(i + 0.5);
        const double rm = r_at(i - 0.5);
        const double ri = r_at(i);
        add_w(i, i - 1, rm / (ri * h2));
        add_w(i, i, -(rp + rm) / (ri * h2));
        add_w(i, i + 1, rp / (ri * h2));
    }
    add_w(n - 1, n - 2, 2.0 / h2);
    SparseMatrix lw_mat(n, m);
    lw_mat.setFromTriplets(lw.begin(), lw.end());

    // Lv: v (n values) -> ∇²v at nodes 0 … n−2.
    std::vector<Triplet> lv;
    lv.reserve(3 * static_cast<std::size_t>(n));
    lv.emplace_back(0, 0, -4.0 / h2);
    lv.emplace_back(0, 1, 4.0 / h2);
    for (int i = 1; i <= n - 2; ++i) {
        const double rp = r_at(i + 0.5);
        const double rm = r_at(i - 0.5);
        const double ri = r_at(i);
        lv.emplace_back(i, i - 1, rm / (ri * h2));
        lv.emplace_back(i, i, -(rp + rm) / (ri * h2));
        lv.emplace_back(i, i + 1, rp / (ri * h2));
    }
    SparseMatrix lv_mat(m, n);
    lv_mat.setFromTriplets(lv.begin(), lv.end());

    const SparseMatrix a = (lv_mat * lw_mat).pruned();

    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; ++i) {
        const double r_lo = i == 0 ? 0.0 : r_at(i - 0.5);
        const double r_hi = r_at(i + 0.5);
        const double cell_area = kPi * (r_hi * r_hi - r_lo * r_lo);
        double q = 0.0;
        if (load.kind == LoadKind::uniform) {
            q = load.total_force / (kPi * plate_radius * plate_radius);
        } else {
            const double c = load.radius;
            const double lo = std::min(c, r_lo);
            const double hi = std::min(c, r_hi);
            const double covered = kPi * (hi * hi - lo * lo);
            q = load.total_force / (kPi * c * c) * covered / cell_area;
        }
        rhs[i] = q / rigidity;
    }

    RadialProfile profile;
    profile.r.resize(static_cast<std::size_t>(n));
    profile.w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) profile.r[static_cast<std::size_t>(i)] = r_at(i);
    if (load.total_force == 0.0) return profile;

    const Eigen::VectorXd w = solve_sparse(a, rhs, false);
    if (!w.allFinite()) throw Error(ErrorKind::solver, "circular plate solve produced non-finite values");
    for (int i = 0; i < m; ++i) profile.w[static_cast<std::size_t>(i)] = w[i];
    return profile;
}

std::pair<int, int> rect_grid_size(const PlateGeometry& geom, int n) {
    if (geom.shape == Shape::circle) throw Error(ErrorKind::invalid_input, "rectangular solver needs a square or rectangle");
    if (!(geom.lx > 0.0) || !(geom.ly > 0.0)) throw Error(ErrorKind::invalid_input, "plate sides must be > 0");
    if (n % 2 == 0) ++n;
    const double h = std::min(geom.lx, geom.ly) / (n - 1);
    auto nodes_for = [&](double side) {
        if (side == std::min(geom.lx, geom.ly)) return n;
        const int intervals = 2 * static_cast<int>(std::lround(side / (2.0 * h)));
        return std::max(intervals, 2) + 1;
    };
    return {nodes_for(geom.lx), nodes_for(geom.ly)};
}

std::vector<double> rasterize_load(const PlateGeometry& geom, const LoadPatch& load, int nx, int ny) {
    require_load(load, geom.in_radius());
    const double hx = geom.lx / (nx - 1);
    const double hy = geom.ly / (ny - 1);
    std::vector<double> nodal(static_cast<std::size_t>(nx) * ny, 0.0);
    if (load.total_force == 0.0) return nodal;

    if (load.kind == LoadKind::uniform) {
        const double q = load.total_force / geom.area();
        for (int j = 1; j < ny - 1; ++j) {
            for (int i = 1; i < nx - 1; ++i) nodal[static_cast<std::size_t>(j) * nx + i] = q * hx * hy;
        }
        return nodal;
    }

    constexpr int kSubsamples = 64;
    const double c = load.radius;
    const double c2 = c * c;
    double total = 0.0;
    for (int j = 1; j < ny - 1; ++j) {
        const double y = (j - 0.5 * (ny - 1)) * hy;
        for (int i = 1; i < nx - 1; ++i) {
            const double x = (i - 0.5 * (nx - 1)) * hx;
            const double near_x = std::max(0.0, std::abs(x) - 0.5 * hx);
            const double near_y = std::max(0.0, std::abs(y) - 0.5 * hy);
            if (near_x * near_x + near_y * near_y >= c2) continue;
            const double far_x = std::abs(x) + 0.5 * hx;
            const double far_y = std::abs(y) + 0.5 * hy;
            double covered = 0.0;
            if (far_x * far_x + far_y * far_y <= c2) {
                covered = hx * hy;
            } else {
                int inside = 0;
                for (int sy = 0; sy < kSubsamples; ++sy) {
                    const double py = y + ((sy + 0.5) / kSubsamples - 0.5) * hy;
                    for (int sx = 0; sx < kSubsamples; ++sx) {
                        const double px = x + ((sx + 0.5) / kSubsamples - 0.5) * hx;
                        if (px * px + py * py <= c2) ++inside;
                    }
                }
                covered = hx * hy * inside / double(kSubsamples * kSubsamples);
            }
            nodal[static_cast<std::size_t>(j) * nx + i] = covered;
            total += covered;
        }
    }
    const double scale = load.total_force / total;
    for (double& p : nodal) p *= scale;
    return nodal;
}

PlateField solve_rect_plate(const PlateGeometry& geom, const LoadPatch& load, double rigidity, int n) {
    if (n < 65) throw Error(ErrorKind::invalid_input, "rectangular plate solver needs n >= 65 nodes per shorter side");
    if (!(rigidity > 0.0)) throw Error(ErrorKind::invalid_input, "flexural rigidity must be > 0");
    const auto [nx, ny] = rect_grid_size(geom, n);

    PlateField field;
    field.nx = nx;
    field.ny = ny;
    field.hx = geom.lx / (nx - 1);
    field.hy = geom.ly / (ny - 1);
    field.w.assign(static_cast<std::size_t>(nx) * ny, 0.0);

    const std::vector<double> nodal = rasterize_load(geom, load, nx, ny);
    if (load.total_force == 0.0) return field;

    const int mx = nx - 2;
    const int my = ny - 2;
    auto unknown = [mx](int i, int j) { return (j - 1) * mx + (i - 1); };
    // Ghost reflection: index −1 ↔ 1 and nx ↔ nx − 2; boundary nodes are zero.
    auto reflect = [](int k, int count) {
        if (k == -1) return 1;
        if (k == count) return count - 2;
        return k;
    };

    const double hx = field.hx;
    const double hy = field.hy;
    const double cx = 1.0 / (hx * hx * hx * hx);
    const double cy = 1.0 / (hy * hy * hy * hy);
    const double cxy = 2.0 / (hx * hx * hy * hy);
    constexpr double k5[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
    constexpr double k3[3] = {1.0, -2.0, 1.0};

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(mx) * my * 13);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(mx) * my);

    for (int j = 1; j <= my; ++j) {
        for (int i = 1; i <= mx; ++i) {
            const int row = unknown(i, j);
            auto add = [&](int ii, int jj, double value) {
                ii = reflect(ii, nx);
                jj = reflect(jj, ny);
                if (ii <= 0 || ii >= nx - 1 || jj <= 0 || jj >= ny - 1) return;
                entries.emplace_back(row, unknown(ii, jj), value);
            };
            for (int d = -2; d <= 2; ++d) {
                add(i + d, j, cx * k5[d + 2]);
                add(i, j + d, cy * k5[d + 2]);
            }
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) add(i + dx, j + dy, cxy * k3[dx + 1] * k3[dy + 1]);
            }
            rhs[row] = nodal[static_cast<std::size_t>(j) * nx + i] / (hx * hy * rigidity);
        }
    }

    SparseMatrix a(static_cast<Eigen::Index>(mx) * my, static_cast<Eigen::Index>(mx) * my);
    a.setFromTriplets(entries.begin(), entries.end());
    const Eigen::VectorXd w = solve_sparse(a, rhs, true);
    if (!w.allFinite()) throw Error(ErrorKind::solver, "rectangular plate solve produced non-finite values");

    for (int j = 1; j <= my; ++j) {
        for (int i = 1; i <= mx; ++i) field.w[static_cast<std::size_t>(j) * nx + i] = w[unknown(i, j)];
    }
    return field;
}

ConvergedCenter converged_rect_center(const PlateGeometry& geom, const LoadPatch& load, double rigidity, int n) {
    if (n % 2 == 0) ++n;
    ConvergedCenter out;
    out.coarse_nodes = n;
    out.fine_nodes = 2 * n - 1;
    out.coarse_center = solve_rect_plate(geom, load, rigidity, out.coarse_nodes).center();
    out.center = solve_rect_plate(geom, load, rigidity, out.fine_nodes).center();
    out.relative_change = relative_change(out.coarse_center, out.center);
    if (out.relative_change > kRefinementTolerance && out.fine_nodes >= 257) {
        std::ostringstream msg;
        msg << to_string(geom.shape) << " plate center deflection changed by " << 100.0 * out.relative_change
            << " % from n = " << out.coarse_nodes << " to n = " << out.fine_nodes << "; refine further";
        out.warning = msg.str();
    }
    return out;
}

ConvergedCenter converged_circular_center(double plate_radius, const LoadPatch& load, double rigidity, int n) {
    ConvergedCenter out;
    out.coarse_nodes = n;
    out.fine_nodes = 2 * n - 1;
    out.coarse_center = solve_circular_plate(plate_radius, load, rigidity, out.coarse_nodes).center();
    out.center = solve_circular_plate(plate_radius, load, rigidity, out.fine_nodes).center();
    out.relative_change = relative_change(out.coarse_center, out.center);
    if (out.relative_change > kRefinementTolerance && out.fine_nodes >= 257) {
        std::ostringstream msg;
        msg << "circle plate center deflection changed by " << 100.0 * out.relative_change << " % on refinement";
        out.warning = msg.str();
    }
    return out;
}

ShapeComparison compare_shapes(const ShapeFixture& fixture, std::span<const double> forces) {
    const DiaphragmSpec& d = fixture.diaphragm;
    const double rigidity = flexural_rigidity(d);
    const LoadPatch unit = LoadPatch::central_disc(fixture.load_radius, 1.0);

    ShapeComparison out;
    out.square = PlateGeometry::equal_area_square(d.radius, d.thickness);
    out.rectangle = PlateGeometry::equal_area_rectangle(d.radius, d.thickness, fixture.rectangle_aspect);
    out.circle_per_newton = converged_circular_center(d.radius, unit, rigidity, fixture.circle_nodes);
    out.square_per_newton = converged_rect_center(out.square, unit, rigidity, fixture.rect_nodes);
    out.rectangle_per_newton = converged_rect_center(out.rectangle, unit, rigidity, fixture.rect_nodes);
    for (const ConvergedCenter* c : {&out.circle_per_newton, &out.square_per_newton, &out.rectangle_per_newton}) {
        if (c->warning) out.warnings.push_back(*c->warning);
    }

    for (double force : forces) {
        if (!(force >= 0.0)) throw Error(ErrorKind::invalid_input, "shape comparison forces must be >= 0");
        ShapeRow row;
        row.force = force;
        row.w_circle = force * out.circle_per_newton.center;
        row.w_square = force * out.square_per_newton.center;
        row.w_rectangle = force * out.rectangle_per_newton.center;
        row.ordered = row.w_circle > row.w_square && row.w_square > row.w_rectangle;
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace micropump::plate
