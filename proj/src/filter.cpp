#include "rfsir/filter.hpp"

#include <cmath>
#include <sstream>

#include "rfsir/errors.hpp"

namespace rfsir {

void PrototypeTable::validate() const {
    if (n < 1) throw validation_error("prototype order must be >= 1");
    if (!(ripple_db > 0)) throw validation_error("prototype ripple must be > 0");
    if (g.size() != static_cast<std::size_t>(n) + 2)
        throw validation_error("prototype table must hold n+2 values");
    if (g.front() != 1.0) throw validation_error("prototype g0 must be 1");
    for (double v : g)
        if (!(v > 0)) throw validation_error("prototype values must be > 0");
}

void FilterPlan::validate() const {
    proto.validate();
    if (!(f0_hz > 0)) throw validation_error("plan f0 must be > 0");
    if (!(fbw > 0) || !(fbw < 1)) throw validation_error("fractional bandwidth must lie in (0, 1)");
    if (k_adj.size() != static_cast<std::size_t>(proto.n) - 1)
        throw validation_error("plan must hold n-1 couplings");
    for (double k : k_adj)
        if (!(k > 0)) throw validation_error("couplings must be > 0");
    if (!(qe_in > 0) || !(qe_out > 0)) throw validation_error("external Qs must be > 0");
    if (!(qu > 0)) throw validation_error("unloaded Q must be > 0");
    if (!detune_hz.empty() && detune_hz.size() != static_cast<std::size_t>(proto.n))
        throw validation_error("detune list must be empty or hold n entries");
}

PrototypeTable chebyshev_prototype(int n, double ripple_db) {
    if (n < 1) throw validation_error("prototype order must be >= 1");
    if (!(ripple_db > 0)) throw validation_error("prototype ripple must be > 0");
    const double beta = std::log(1.0 / std::tanh(ripple_db / 17.37));
    const double gamma = std::sinh(beta / (2.0 * n));
    auto a = [&](int k) { return std::sin((2.0 * k - 1.0) * M_PI / (2.0 * n)); };
    auto b = [&](int k) {
        const double s = std::sin(k * M_PI / n);
        return gamma * gamma + s * s;
    };
    PrototypeTable t;
    t.n = n;
    t.ripple_db = ripple_db;
    t.g.resize(static_cast<std::size_t>(n) + 2);
    t.g[0] = 1.0;
    t.g[1] = 2.0 * a(1) / gamma;
    for (int k = 2; k <= n; ++k)
        t.g[k] = 4.0 * a(k - 1) * a(k) / (b(k - 1) * t.g[k - 1]);
    t.g[n + 1] = (n % 2 == 1) ? 1.0 : 1.0 / std::pow(std::tanh(beta / 4.0), 2);
    return t;
}

double ripple_from_return_loss(double return_loss_db) {
    const double rl = std::abs(return_loss_db);
    if (!(rl > 0)) throw validation_error("return-loss target must be nonzero");
    const double refl_power = std::pow(10.0, -rl / 10.0);
    if (refl_power >= 1.0) throw validation_error("return-loss target too small");
    return -10.0 * std::log10(1.0 - refl_power);
}

FilterPlan coupling_plan(const PrototypeTable& proto, double f0_hz, double fbw, double qu) {
    proto.validate();
    if (!(fbw > 0) || !(fbw < 1)) throw validation_error("fractional bandwidth must lie in (0, 1)");
    FilterPlan p;
    p.f0_hz = f0_hz;
    p.fbw = fbw;
    p.proto = proto;
    p.qu = qu;
    const int n = proto.n;
    p.k_adj.resize(static_cast<std::size_t>(n) - 1);
    for (int i = 1; i <= n - 1; ++i)
        p.k_adj[i - 1] = fbw / std::sqrt(proto.g[i] * proto.g[i + 1]);
    p.qe_in = proto.g[0] * proto.g[1] / fbw;
    p.qe_out = proto.g[n] * proto.g[n + 1] / fbw;
    p.validate();
    return p;
}

BandEdges band_edges(double f0_hz, double fbw) {
    const double half = fbw / 2.0;
    const double f_hi = f0_hz * (half + std::sqrt(1.0 + half * half));
    return {f_hi - fbw * f0_hz, f_hi};
}

TwoPortSweep frequency_response(const FilterPlan& plan, const FrequencyGrid& grid) {
    plan.validate();
    grid.validate();
    const int n = plan.proto.n;
    const bool lossy = std::isfinite(plan.qu);
    const double loss_term = lossy ? 1.0 / (plan.fbw * plan.qu) : 0.0;
    const double qe1s = plan.qe_in * plan.fbw;
    const double qens = plan.qe_out * plan.fbw;

    TwoPortSweep sw;
    sw.grid = grid;
    const std::size_t npts = grid.size();
    sw.s11.resize(npts);
    sw.s21.resize(npts);
    sw.s12.resize(npts);
    sw.s22.resize(npts);

    std::vector<cplx> diag(n), lower(std::max(0, n - 1));
    std::vector<cplx> x(n), y(n), cprime(std::max(0, n - 1));

    for (std::size_t ip = 0; ip < npts; ++ip) {
        const double f = grid.points_hz[ip];
        for (int i = 0; i < n; ++i) {
            const double f0i =
                plan.f0_hz + (plan.detune_hz.empty() ? 0.0 : plan.detune_hz[i]);
            const double lam = (f / f0i - f0i / f) / plan.fbw;
            diag[i] = cplx(loss_term, lam);
        }
        diag[0] += 1.0 / qe1s;
        diag[n - 1] += 1.0 / qens;
        for (int i = 0; i < n - 1; ++i) lower[i] = cplx(0.0, -plan.k_adj[i] / plan.fbw);

        // Thomas elimination for the symmetric tridiagonal system, solving
        // against e1 and en simultaneously. Pivots keep Re > 0 for finite qu.
        x.assign(n, cplx(0, 0));
        y.assign(n, cplx(0, 0));
        x[0] = 1.0;
        y[n - 1] = 1.0;
        cplx piv = diag[0];
        if (std::abs(piv) < 1e-290) {
            std::ostringstream os;
            os << "singular response matrix at " << f << " Hz";
            throw numeric_error(os.str());
        }
        for (int i = 1; i < n; ++i) {
            cprime[i - 1] = lower[i - 1] / piv;
            x[i] -= cprime[i - 1] * x[i - 1];
            y[i] -= cprime[i - 1] * y[i - 1];
            piv = diag[i] - lower[i - 1] * cprime[i - 1];
            if (std::abs(piv) < 1e-290) {
                std::ostringstream os;
                os << "singular response matrix at " << f << " Hz";
                throw numeric_error(os.str());
            }
            diag[i] = piv; // store eliminated pivot
        }
        x[n - 1] /= diag[n - 1];
        y[n - 1] /= diag[n - 1];
        for (int i = n - 2; i >= 0; --i) {
            x[i] = (x[i] - lower[i] * x[i + 1]) / diag[i];
            y[i] = (y[i] - lower[i] * y[i + 1]) / diag[i];
        }

        const cplx s21 = 2.0 / std::sqrt(qe1s * qens) * x[n - 1];
        sw.s21[ip] = s21;
        sw.s12[ip] = s21;
        sw.s11[ip] = 1.0 - 2.0 / qe1s * x[0];
        sw.s22[ip] = 1.0 - 2.0 / qens * y[n - 1];
    }
    return sw;
}

double midband_il_estimate(const PrototypeTable& proto, double fbw, double qu) {
    proto.validate();
    if (!(fbw > 0) || !(fbw < 1)) throw validation_error("fractional bandwidth must lie in (0, 1)");
    if (!(qu > 0)) throw validation_error("unloaded Q must be > 0");
    if (!std::isfinite(qu)) return 0.0;
    double sum = 0;
    for (int k = 1; k <= proto.n; ++k) sum += proto.g[k];
    return 10.0 / std::log(10.0) * sum / (fbw * qu);
}

} // namespace rfsir
