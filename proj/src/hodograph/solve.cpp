#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "hydro/hodograph.hpp"

namespace hydro::hodograph {

const char* status_name(NodeStatus s) {
    switch (s) {
        case NodeStatus::Converged: return "converged";
        case NodeStatus::Singular: return "singular";
        case NodeStatus::OutOfDomain: return "out-of-domain";
        case NodeStatus::Diverged: return "diverged";
        case NodeStatus::Unsolved: return "unsolved";
    }
    return "unsolved";
}

NodeStatus status_from_name(const std::string& s) {
    for (NodeStatus v : {NodeStatus::Converged, NodeStatus::Singular, NodeStatus::OutOfDomain, NodeStatus::Diverged,
                         NodeStatus::Unsolved})
        if (s == status_name(v)) return v;
    throw std::invalid_argument("unknown node status '" + s + "'");
}

std::size_t SolutionGrid::converged() const {
    return static_cast<std::size_t>(std::count(status.begin(), status.end(), NodeStatus::Converged));
}

double SolutionGrid::converged_fraction() const {
    return status.empty() ? 0.0 : static_cast<double>(converged()) / static_cast<double>(status.size());
}

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::fabs(a));
    return m;
}

bool finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

// Solves A x = b by Gaussian elimination with partial pivoting. Returns false
// when |det A| is below tol times the product of the row norms.
bool solve_linear(Matrix A, std::vector<double> b, std::vector<double>& x, double tol) {
    std::size_t n = b.size();
    double scale = 1.0;
    for (const auto& row : A) {
        double s = 0.0;
        for (double a : row) s += a * a;
        scale *= std::sqrt(s);
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) return false;
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(A[r][c]) > std::fabs(A[p][c])) p = r;
        if (p != c) {
            std::swap(A[p], A[c]);
            std::swap(b[p], b[c]);
        }
        det *= A[c][c];
        if (A[c][c] == 0.0) return false;
        for (std::size_t r = c + 1; r < n; ++r) {
            double f = A[r][c] / A[c][c];
            for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    if (std::fabs(det) < tol * scale) return false;
    x.assign(n, 0.0);
    for (std::size_t c = n; c-- > 0;) {
        double s = b[c];
        for (std::size_t k = c + 1; k < n; ++k) s -= A[c][k] * x[k];
        x[c] = s / A[c][c];
    }
    return true;
}

}  // namespace

NodeResult newton(const ImplicitSystem& imp, std::vector<double> u, double x, double t, const SolveOptions& opt) {
    NodeResult res;
    auto residual = [&](const std::vector<double>& p, std::vector<double>& F) {
        try {
            F = imp.eval(p, x, t);
            return finite(F);
        } catch (const DomainError&) {
            return false;
        }
    };
    std::vector<double> F;
    if (!residual(u, F)) {
        res.status = NodeStatus::OutOfDomain;
        res.u = u;
        return res;
    }
    double norm = inf_norm(F);
    for (int it = 0; it <= opt.max_iter; ++it) {
        res.iterations = it;
        if (norm < opt.tol) {
            res.status = NodeStatus::Converged;
            res.u = u;
            res.residual = norm;
            return res;
        }
        if (it == opt.max_iter) break;
        Matrix Jm;
        try {
            Jm = imp.jacobian(u, x, t);
        } catch (const DomainError&) {
            res.status = NodeStatus::OutOfDomain;
            res.u = u;
            return res;
        }
        std::vector<double> neg(F.size()), step;
        for (std::size_t i = 0; i < F.size(); ++i) neg[i] = -F[i];
        if (!solve_linear(Jm, neg, step, opt.singular_tol)) {
            res.status = NodeStatus::Singular;
            res.u = u;
            res.residual = norm;
            return res;
        }
        // Step halving until the residual decreases.
        double lambda = 1.0;
        bool accepted = false, any_valid = false;
        std::vector<double> trial(u.size()), Ft;
        for (int h = 0; h < 30; ++h, lambda *= 0.5) {
            for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + lambda * step[i];
            if (!residual(trial, Ft)) continue;
            any_valid = true;
            double tn = inf_norm(Ft);
            if (tn < norm || tn < opt.tol) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            res.status = any_valid ? NodeStatus::Diverged : NodeStatus::OutOfDomain;
            res.u = u;
            res.residual = norm;
            return res;
        }
        u = trial;
        F = Ft;
        norm = inf_norm(F);
    }
    res.status = NodeStatus::Diverged;
    res.u = u;
    res.residual = norm;
    return res;
}

SolutionGrid solve_grid(const ImplicitSystem& imp, const GridAxes& axes, const std::vector<double>& seed_guess,
                        const SolveOptions& opt) {
    if (axes.x.empty() || axes.t.empty()) throw std::invalid_argument("grid axes must not be empty");
    if (seed_guess.size() != imp.n()) throw std::invalid_argument("seed guess has wrong dimension");
    SolutionGrid g;
    g.vars = imp.vars;
    g.x = axes.x;
    g.t = axes.t;
    g.provenance = imp.provenance;
    std::size_t nx = g.nx(), nt = g.nt(), n = g.n();
    g.u.assign(nx * nt * n, std::numeric_limits<double>::quiet_NaN());
    g.status.assign(nx * nt, NodeStatus::Unsolved);

    auto nearest = [](const std::vector<double>& axis, double v) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < axis.size(); ++k)
            if (std::fabs(axis[k] - v) < std::fabs(axis[best] - v)) best = k;
        return best;
    };
    std::size_t j0 = opt.seed_node ? opt.seed_node->first : nearest(g.x, opt.x0);
    std::size_t k0 = opt.seed_node ? opt.seed_node->second : nearest(g.t, opt.t0);
    if (j0 >= nx || k0 >= nt) throw std::invalid_argument("seed node outside the grid");

    auto store = [&](std::size_t k, std::size_t j, const NodeResult& r) {
        g.status[k * nx + j] = r.status;
        if (r.status == NodeStatus::Converged)
            for (std::size_t i = 0; i < n; ++i) g.at(k, j, i) = r.u[i];
    };
    auto value = [&](std::size_t k, std::size_t j) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = g.at(k, j, i);
        return v;
    };
    auto ok = [&](std::size_t k, std::size_t j) { return g.node(k, j) == NodeStatus::Converged; };

    NodeResult seed = newton(imp, seed_guess, g.x[j0], g.t[k0], opt);
    if (seed.status != NodeStatus::Converged)
        throw SolveError(std::string("seed node did not converge (") + status_name(seed.status) + ")");
    store(k0, j0, seed);

    // Sweeps a row outward from a solved column, warm-starting from the last
    // converged node on the same side.
    auto sweep_row = [&](std::size_t k, std::size_t jc) {
        for (int dir : {1, -1}) {
            std::vector<double> warm = value(k, jc);
            for (std::size_t j = jc + dir; j < nx; j += dir) {
                if (g.node(k, j) == NodeStatus::Converged) {
                    warm = value(k, j);
                    continue;
                }
                NodeResult r = newton(imp, warm, g.x[j], g.t[k], opt);
                store(k, j, r);
                if (r.status == NodeStatus::Converged) warm = r.u;
            }
        }
    };
    sweep_row(k0, j0);

    unsigned threads = std::max(1u, opt.threads);
    auto solve_row_from = [&](std::size_t k, std::size_t kp) {
        // Column-wise warm starts from the neighbouring row are independent.
        auto work = [&](std::size_t begin, std::size_t end) {
            for (std::size_t j = begin; j < end; ++j) {
                if (!ok(kp, j)) continue;
                store(k, j, newton(imp, value(kp, j), g.x[j], g.t[k], opt));
            }
        };
        if (threads == 1 || nx < 2 * threads) {
            work(0, nx);
        } else {
            std::vector<std::thread> pool;
            std::size_t chunk = (nx + threads - 1) / threads;
            for (unsigned w = 0; w < threads; ++w) {
                std::size_t b = w * chunk, e = std::min(nx, b + chunk);
                if (b < e) pool.emplace_back(work, b, e);
            }
            for (auto& th : pool) th.join();
        }
        // Nodes whose neighbour failed get a second chance from the row itself.
        std::size_t anchor = nx;
        for (std::size_t j = 0; j < nx; ++j)
            if (ok(k, j) && (anchor == nx || (j > j0 ? j - j0 : j0 - j) < (anchor > j0 ? anchor - j0 : j0 - anchor)))
                anchor = j;
        if (anchor < nx) sweep_row(k, anchor);
    };
    for (std::size_t k = k0 + 1; k < nt; ++k) solve_row_from(k, k - 1);
    for (std::size_t k = k0; k-- > 0;) solve_row_from(k, k + 1);
    return g;
}

ResidualReport residual_pde(const QuasiLinearSystem& sys, const SolutionGrid& g) {
    if (sys.n() != g.n()) throw std::invalid_argument("system and grid have different component counts");
    std::size_t nx = g.nx(), nt = g.nt(), n = g.n();
    if (nx < 3 || nt < 3) throw std::invalid_argument("residual needs at least 3 nodes per axis");
    ResidualReport rep;
    std::vector<double> u(n), ux(n), ut(n);
    for (std::size_t k = 1; k + 1 < nt; ++k) {
        double dt = g.t[k + 1] - g.t[k - 1];
        for (std::size_t j = 1; j + 1 < nx; ++j) {
            if (g.node(k, j) != NodeStatus::Converged || g.node(k - 1, j) != NodeStatus::Converged ||
                g.node(k + 1, j) != NodeStatus::Converged || g.node(k, j - 1) != NodeStatus::Converged ||
                g.node(k, j + 1) != NodeStatus::Converged)
                continue;
            double dx = g.x[j + 1] - g.x[j - 1];
            for (std::size_t i = 0; i < n; ++i) {
                u[i] = g.at(k, j, i);
                ux[i] = (g.at(k, j + 1, i) - g.at(k, j - 1, i)) / dx;
                ut[i] = (g.at(k + 1, j, i) - g.at(k - 1, j, i)) / dt;
            }
            Env e = sys.env(u, g.t[k], g.x[j]);
            for (std::size_t i = 0; i < n; ++i) {
                double flux = 0.0;
                for (std::size_t m = 0; m < n; ++m)
                    if (!sys.M[i][m].is_zero()) flux += sys.M[i][m].eval(e) * ux[m];
                double r = std::fabs(ut[i] - flux) / std::max(1.0, std::fabs(flux));
                if (r > rep.max_residual || rep.nodes == 0) {
                    if (r > rep.max_residual) rep.max_residual = r;
                    rep.worst_x = j;
                    rep.worst_t = k;
                    rep.worst_component = i;
                }
            }
            ++rep.nodes;
        }
    }
    if (rep.nodes == 0) throw std::runtime_error("no interior node has a converged stencil");
    return rep;
}

ResidualReport residual_pde(const DiagonalSystem& sys, const SolutionGrid& g) {
    return residual_pde(quasi_linear(sys), g);
}

}  // namespace hydro::hodograph
