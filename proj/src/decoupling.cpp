#include <chrono>
#include <cmath>

#include "pv/errors.hpp"
#include "pv/gauss_legendre.hpp"
#include "pv/kahan.hpp"
#include "pv/oscillatory.hpp"
#include "pv/rng.hpp"

namespace pv {

CellFunction CellFunction::single_cell(int cells_per_axis, int a, int b, cplx value) {
    CellFunction g;
    g.cells_per_axis = cells_per_axis;
    g.values.assign(static_cast<std::size_t>(cells_per_axis) * static_cast<std::size_t>(cells_per_axis),
                    cplx(0.0, 0.0));
    g.values[static_cast<std::size_t>(a) * static_cast<std::size_t>(cells_per_axis) + static_cast<std::size_t>(b)] = value;
    return g;
}

CellFunction CellFunction::random_unimodular(int cells_per_axis, std::uint64_t seed) {
    CellFunction g;
    g.cells_per_axis = cells_per_axis;
    g.values.resize(static_cast<std::size_t>(cells_per_axis) * static_cast<std::size_t>(cells_per_axis));
    Rng rng = Rng::stream(seed, 7);
    for (auto& v : g.values) {
        double theta = 6.283185307179586476925287 * rng.unit();
        v = cplx(std::cos(theta), std::sin(theta));
    }
    return g;
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// ball weight (1 + |x-c|/R)^(-100 n), truncated at 4R where it is far below
// 1e-10 of its peak
double ball_weight(double r, double radius, int dim) {
    return std::pow(1.0 + r / radius, -100.0 * dim);
}

struct RadialSampler {
    double radius = 0.0;
    int dim = 0;
    int segments = 65536;
    std::vector<double> cum;   // cumulative segment masses
    double total = 0.0;
    double dr = 0.0;

    void build(double rad, int d) {
        radius = rad;
        dim = d;
        dr = 4.0 * radius / segments;
        cum.resize(static_cast<std::size_t>(segments));
        double acc = 0.0;
        for (int i = 0; i < segments; ++i) {
            double mid = (i + 0.5) * dr;
            acc += std::pow(mid, dim - 1) * ball_weight(mid, radius, dim) * dr;
            cum[static_cast<std::size_t>(i)] = acc;
        }
        total = acc;
    }

    // draws r and returns the importance weight w(r) r^{n-1} / density(r)
    double draw(Rng& rng, double& weight_out) const {
        double u = rng.unit_pos() * total;
        std::size_t lo = 0, hi = cum.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (cum[mid] < u)
                lo = mid + 1;
            else
                hi = mid;
        }
        double seg_mass = cum[lo] - (lo > 0 ? cum[lo - 1] : 0.0);
        double r = (static_cast<double>(lo) + rng.unit()) * dr;
        double density = seg_mass / total / dr;
        weight_out = std::pow(r, dim - 1) * ball_weight(r, radius, dim) / (density * total);
        return r;
    }
};

struct CellGeometry {
    double t0, s0, side;
    std::vector<double> sup_dt;  // per component, sup over the cell of |d phi_c / dt|
    std::vector<double> sup_ds;
};

std::vector<CellGeometry> cell_geometry(const MonomialSystem& sys, int cells) {
    std::vector<CellGeometry> geo;
    geo.reserve(static_cast<std::size_t>(cells) * static_cast<std::size_t>(cells));
    const double side = 1.0 / cells;
    for (int a = 0; a < cells; ++a)
        for (int b = 0; b < cells; ++b) {
            CellGeometry g;
            g.t0 = a * side;
            g.s0 = b * side;
            g.side = side;
            const double th = g.t0 + side, sh = g.s0 + side;
            g.sup_dt.resize(static_cast<std::size_t>(sys.n));
            g.sup_ds.resize(static_cast<std::size_t>(sys.n));
            for (int c = 0; c < sys.n; ++c) {
                const Monomial& m = sys.at(c);
                g.sup_dt[static_cast<std::size_t>(c)] =
                    m.i >= 1 ? m.i * std::pow(th, m.i - 1) * std::pow(sh, m.j) : 0.0;
                g.sup_ds[static_cast<std::size_t>(c)] =
                    m.j >= 1 ? m.j * std::pow(th, m.i) * std::pow(sh, m.j - 1) : 0.0;
            }
            geo.push_back(std::move(g));
        }
    return geo;
}

// integral of e(x . phi) over one cell by panelled tensor Gauss-Legendre;
// panel counts keep the phase change below a quarter cycle per panel
cplx cell_integral(const MonomialSystem& sys, const CellGeometry& cell, const std::vector<double>& x,
                   const GaussLegendre& gl, int max_panels) {
    double grad_t = 0.0, grad_s = 0.0;
    for (int c = 0; c < sys.n; ++c) {
        grad_t += std::fabs(x[static_cast<std::size_t>(c)]) * cell.sup_dt[static_cast<std::size_t>(c)];
        grad_s += std::fabs(x[static_cast<std::size_t>(c)]) * cell.sup_ds[static_cast<std::size_t>(c)];
    }
    int panels_t = std::max(1, static_cast<int>(std::ceil(4.0 * grad_t * cell.side)));
    int panels_s = std::max(1, static_cast<int>(std::ceil(4.0 * grad_s * cell.side)));
    if (panels_t > max_panels || panels_s > max_panels)
        throw BudgetError("quadrature resolution insufficient for the requested frequency scale");

    const int q = static_cast<int>(gl.nodes.size());
    const double ht = cell.side / panels_t / 2.0;  // panel half-widths
    const double hs = cell.side / panels_s / 2.0;
    KahanSum re, im;
    std::vector<double> tpow(static_cast<std::size_t>(sys.k + 1)), spow(static_cast<std::size_t>(sys.k + 1));
    for (int pt = 0; pt < panels_t; ++pt) {
        const double tc = cell.t0 + (2 * pt + 1) * ht;
        for (int ps = 0; ps < panels_s; ++ps) {
            const double sc = cell.s0 + (2 * ps + 1) * hs;
            for (int gi = 0; gi < q; ++gi) {
                const double t = tc + ht * gl.nodes[static_cast<std::size_t>(gi)];
                tpow[0] = 1.0;
                for (int e = 1; e <= sys.k; ++e) tpow[static_cast<std::size_t>(e)] = tpow[static_cast<std::size_t>(e - 1)] * t;
                for (int gj = 0; gj < q; ++gj) {
                    const double s = sc + hs * gl.nodes[static_cast<std::size_t>(gj)];
                    spow[0] = 1.0;
                    for (int e = 1; e <= sys.k; ++e) spow[static_cast<std::size_t>(e)] = spow[static_cast<std::size_t>(e - 1)] * s;
                    double phase = 0.0;
                    for (int c = 0; c < sys.n; ++c) {
                        const Monomial& mo = sys.at(c);
                        phase += x[static_cast<std::size_t>(c)] * tpow[static_cast<std::size_t>(mo.i)] * spow[static_cast<std::size_t>(mo.j)];
                    }
                    const double w = gl.weights[static_cast<std::size_t>(gi)] * gl.weights[static_cast<std::size_t>(gj)] * ht * hs;
                    const double ang = kTwoPi * phase;
                    re.add(w * std::cos(ang));
                    im.add(w * std::sin(ang));
                }
            }
        }
    }
    return {re.value(), im.value()};
}

}  // namespace

cplx extension_cell_integral(const MonomialSystem& sys, int cells_per_axis, int a, int b,
                             const std::vector<double>& x, int gl_order, int max_panels) {
    if (a < 0 || b < 0 || a >= cells_per_axis || b >= cells_per_axis) throw ValidationError("cell index out of range");
    if (static_cast<int>(x.size()) != sys.n) throw ValidationError("frequency vector length must be n");
    std::vector<CellGeometry> geo = cell_geometry(sys, cells_per_axis);
    GaussLegendre gl = gauss_legendre(gl_order);
    return cell_integral(sys, geo[static_cast<std::size_t>(a) * static_cast<std::size_t>(cells_per_axis) + static_cast<std::size_t>(b)], x, gl,
                         max_panels);
}

ProbeReport decoupling_probe(const MonomialSystem& sys, const CellFunction& g, std::int64_t n, double p,
                             const SamplePlan& plan, const ProbeOptions& opts) {
    if (p < 1.0) throw ValidationError("probe exponent must be >= 1");
    if (n < 1) throw ValidationError("frequency scale must be >= 1");
    const int cells = g.cells_per_axis;
    if (cells < 1) throw ValidationError("cell function is empty");
    std::int64_t check = 1;
    for (int e = 0; e < sys.k; ++e) check *= cells;
    if (check != n)
        throw ValidationError("cell count must satisfy cells_per_axis^k == N");
    if (g.values.size() != static_cast<std::size_t>(cells) * static_cast<std::size_t>(cells))
        throw ValidationError("cell value count mismatch");
    if (!opts.center.empty() && static_cast<int>(opts.center.size()) != sys.n)
        throw ValidationError("ball center must have dimension n");
    if (plan.samples < 1) throw ValidationError("need at least one sample");
    if (plan.domain != SampleDomain::unspecified && plan.domain != SampleDomain::ball)
        throw ValidationError("the probe requires a ball sample plan");

    auto t0 = std::chrono::steady_clock::now();
    GaussLegendre gl = gauss_legendre(opts.gl_order);
    std::vector<CellGeometry> geo = cell_geometry(sys, cells);
    RadialSampler sampler;
    sampler.build(static_cast<double>(n), sys.n);

    const std::size_t ncells = geo.size();
    const std::size_t dim = static_cast<std::size_t>(sys.n);
    constexpr std::uint64_t chunk = 512;
    const std::size_t nchunks = static_cast<std::size_t>((plan.samples + chunk - 1) / chunk);
    std::vector<double> chunk_lhs(nchunks);
    std::vector<std::vector<double>> chunk_rhs(nchunks);

    parallel_chunks(nchunks, plan.threads, [&](std::size_t ci) {
        KahanSum lhs;
        std::vector<KahanSum> rhs(ncells);
        const std::uint64_t lo = static_cast<std::uint64_t>(ci) * chunk;
        const std::uint64_t hi = std::min(plan.samples, lo + chunk);
        std::vector<double> x(dim);
        for (std::uint64_t m = lo; m < hi; ++m) {
            Rng rng = Rng::stream(plan.seed, m);
            double weight = 0.0;
            double r = sampler.draw(rng, weight);
            double norm2 = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                x[c] = rng.gaussian();
                norm2 += x[c] * x[c];
            }
            double scale = r / std::sqrt(norm2 > 0 ? norm2 : 1.0);
            for (std::size_t c = 0; c < dim; ++c) {
                x[c] *= scale;
                if (!opts.center.empty()) x[c] += opts.center[c];
            }
            x[0] += opts.modulation_u;
            x[1] += opts.modulation_v;

            KahanSum ere, eim;
            for (std::size_t cell = 0; cell < ncells; ++cell) {
                cplx integral = cell_integral(sys, geo[cell], x, gl, opts.max_panels_per_axis);
                cplx contrib = g.values[cell] * integral;
                ere.add(contrib.real());
                eim.add(contrib.imag());
                rhs[cell].add(weight * std::pow(std::abs(contrib), p));
            }
            lhs.add(weight * std::pow(std::hypot(ere.value(), eim.value()), p));
        }
        chunk_lhs[ci] = lhs.value();
        chunk_rhs[ci].resize(ncells);
        for (std::size_t cell = 0; cell < ncells; ++cell) chunk_rhs[ci][cell] = rhs[cell].value();
    });

    KahanSum lhs_total;
    std::vector<KahanSum> rhs_total(ncells);
    for (std::size_t ci = 0; ci < nchunks; ++ci) {
        lhs_total.add(chunk_lhs[ci]);
        for (std::size_t cell = 0; cell < ncells; ++cell) rhs_total[cell].add(chunk_rhs[ci][cell]);
    }
    KahanSum rhs_sum;
    for (std::size_t cell = 0; cell < ncells; ++cell) rhs_sum.add(rhs_total[cell].value());

    auto t1 = std::chrono::steady_clock::now();
    ProbeReport rep;
    rep.lhs = std::pow(lhs_total.value() / static_cast<double>(plan.samples), 1.0 / p);
    rep.rhs = std::pow(rhs_sum.value() / static_cast<double>(plan.samples), 1.0 / p);
    if (rep.rhs == 0.0) throw ValidationError("cell function must be nonzero");
    rep.ratio = rep.lhs / rep.rhs;
    rep.samples = plan.samples;
    rep.seed = plan.seed;
    rep.seconds = std::chrono::duration<double>(t1 - t0).count();
    return rep;
}

AscentReport probe_maximize(const MonomialSystem& sys, std::int64_t n, double p, const SamplePlan& plan,
                            int restarts, int sweeps, const ProbeOptions& opts) {
    if (restarts < 1 || sweeps < 0) throw ValidationError("bad ascent parameters");
    AscentReport best;
    best.restarts = restarts;
    best.best.ratio = -1.0;
    for (int r = 0; r < restarts; ++r) {
        std::uint64_t gseed = plan.seed ^ (0x85ebca6bULL * static_cast<std::uint64_t>(r + 1));
        int cells = 1;
        {
            // cells_per_axis = n^(1/k), validated inside decoupling_probe
            double root = std::pow(static_cast<double>(n), 1.0 / sys.k);
            cells = static_cast<int>(std::llround(root));
        }
        CellFunction g = CellFunction::random_unimodular(cells, gseed);
        ProbeReport cur = decoupling_probe(sys, g, n, p, plan, opts);
        Rng rng = Rng::stream(plan.seed, 1000 + static_cast<std::uint64_t>(r));
        double step = 1.5;
        for (int sweep = 0; sweep < sweeps; ++sweep) {
            bool improved = false;
            for (std::size_t cell = 0; cell < g.values.size(); ++cell) {
                for (double sign : {1.0, -1.0}) {
                    CellFunction cand = g;
                    double theta = sign * step;
                    cand.values[cell] *= cplx(std::cos(theta), std::sin(theta));
                    ProbeReport rep = decoupling_probe(sys, cand, n, p, plan, opts);
                    if (rep.ratio > cur.ratio) {
                        g = std::move(cand);
                        cur = rep;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) step *= 0.5;
            if (step < 1e-3) break;
            (void)rng;
        }
        if (cur.ratio > best.best.ratio) {
            best.best = cur;
            best.best_g = g;
        }
    }
    return best;
}

}  // namespace pv
