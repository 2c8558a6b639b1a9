#include "qpv/adversary.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "qpv/stats.h"

namespace qpv {

namespace {

std::uint64_t lex_bit(std::uint64_t lex, int i, int m) {
    return (lex >> (m - 1 - i)) & 1;
}

// Index of each global basis state within a sub-register (bit k of the result
// is the bit of qubits[k]).
std::vector<std::uint32_t> gather_index(int total, const std::vector<int>& qubits) {
    std::vector<std::uint32_t> out(std::size_t{1} << total);
    for (std::size_t k = 0; k < out.size(); k++) {
        std::uint32_t v = 0;
        for (std::size_t b = 0; b < qubits.size(); b++) {
            v |= static_cast<std::uint32_t>((k >> qubits[b]) & 1) << b;
        }
        out[k] = v;
    }
    return out;
}

void check_compatible(const Strategy& s, const FunctionTable& f, double gamma) {
    s.validate();
    if (f.m() != s.m) {
        throw std::invalid_argument("strategy has m = " + std::to_string(s.m) + " but f has m = " +
                                    std::to_string(f.m()));
    }
    if (!s.depends_only_on_z() && s.n != f.n()) {
        throw std::invalid_argument("strategy inputs have n = " + std::to_string(s.n) + " but f has n = " +
                                    std::to_string(f.n()));
    }
    if (!(gamma >= 0 && gamma < 0.5)) {
        throw std::invalid_argument("gamma must lie in [0, 0.5)");
    }
}

// |psi_xy> with the verifier's basis rotation H^{z_i} on V_i (BB84).
Amplitudes prepared(const Strategy& s, std::uint64_t x, std::uint64_t y) {
    Amplitudes amps = s.state.amplitudes();
    if (!s.alice_unitaries.empty()) {
        auto q = s.a_qubits();
        apply_matrix(amps, s.alice_unitaries[x], q);
    }
    if (!s.bob_unitaries.empty()) {
        auto q = s.b_qubits();
        apply_matrix(amps, s.bob_unitaries[y], q);
    }
    return amps;
}

// P[d + Bin(h, 1/2) <= budget].
double half_tail(int d, int h, int budget) {
    if (d > budget) {
        return 0.0;
    }
    return binomial_cdf(h, budget - d, 0.5);
}

struct Reshaped {
    // C_v as dA' x dB' matrices, one per verifier string (basis index of V).
    std::vector<Matrix> blocks;
};

Reshaped reshape(const Strategy& s, const Amplitudes& amps) {
    const int total = s.total_qubits();
    auto vi = gather_index(total, s.v_qubits());
    auto ai = gather_index(total, s.a_prime_qubits());
    auto bi = gather_index(total, s.b_prime_qubits());
    Reshaped r;
    const Eigen::Index da = Eigen::Index{1} << s.a_prime_width();
    const Eigen::Index db = Eigen::Index{1} << s.b_prime_width();
    r.blocks.assign(std::size_t{1} << s.m, Matrix::Zero(da, db));
    for (Eigen::Index k = 0; k < amps.size(); k++) {
        r.blocks[vi[k]](ai[k], bi[k]) = amps[k];
    }
    return r;
}

double bb84_value(const Strategy& s, std::uint64_t x, std::uint64_t y, std::uint64_t z, double gamma) {
    const int m = s.m;
    Amplitudes amps = prepared(s, x, y);
    for (int i = 0; i < m; i++) {
        if (lex_bit(z, i, m)) {
            int t = i;
            apply_matrix(amps, gates::hadamard(), {&t, 1});
        }
    }
    const int budget = error_budget(gamma, m);
    const std::size_t slot = s.response_slot(x, y, z);
    const auto& af = s.alice_povms[slot];
    const auto& bf = s.bob_povms[slot];
    Reshaped r = reshape(s, amps);
    double total = 0;
    for (std::uint64_t v = 0; v < r.blocks.size(); v++) {
        const Matrix& c = r.blocks[v];
        if (c.squaredNorm() == 0) {
            continue;
        }
        const std::uint64_t vlex = reverse_bits(v, static_cast<std::size_t>(m));
        for (std::uint64_t a = 0; a < af.size(); a++) {
            if (std::popcount(vlex ^ a) > budget) {
                continue;
            }
            if (af[a].squaredNorm() == 0 || bf[a].squaredNorm() == 0) {
                continue;
            }
            Matrix t = af[a] * c * bf[a].transpose();
            total += (c.conjugate().cwiseProduct(t)).sum().real();
        }
    }
    return std::clamp(total, 0.0, 1.0);
}

Amplitudes routed(const Strategy& s, std::uint64_t x, std::uint64_t y, std::uint64_t z, std::vector<int>& returned) {
    const int m = s.m;
    Amplitudes amps = prepared(s, x, y);
    const std::size_t slot = s.response_slot(x, y, z);
    auto ap = s.a_prime_qubits();
    auto bp = s.b_prime_qubits();
    apply_matrix(amps, s.alice_routing[slot], ap);
    apply_matrix(amps, s.bob_routing[slot], bp);
    returned.assign(static_cast<std::size_t>(m), 0);
    const Matrix rot = gates::bell_rotation();
    for (int i = 0; i < m; i++) {
        returned[i] = lex_bit(z, i, m) ? bp[s.bob_outputs[i]] : ap[s.alice_outputs[i]];
        int targets[2] = {i, returned[i]};
        apply_matrix(amps, rot, targets);
    }
    return amps;
}

double routing_value(const Strategy& s, std::uint64_t x, std::uint64_t y, std::uint64_t z, double gamma,
                     RoutingCheck check) {
    const int m = s.m;
    std::vector<int> ret;
    Amplitudes amps = routed(s, x, y, z, ret);
    const int budget = error_budget(gamma, m);
    double total = 0;
    for (Eigen::Index k = 0; k < amps.size(); k++) {
        double w = std::norm(amps[k]);
        if (w == 0) {
            continue;
        }
        int fails = 0;
        int halves = 0;
        for (int i = 0; i < m; i++) {
            int label = static_cast<int>((k >> i) & 1) + 2 * static_cast<int>((k >> ret[i]) & 1);
            double ps = pair_success(check, label);
            fails += ps == 0.0;
            halves += ps == 0.5;
        }
        total += w * half_tail(fails, halves, budget);
    }
    return std::clamp(total, 0.0, 1.0);
}

std::vector<InputPair> all_pairs(int n) {
    if (n > kMaxTableN) {
        throw std::invalid_argument("full success tables need n <= " + std::to_string(kMaxTableN) +
                                    "; pass an explicit (x, y) subset");
    }
    std::vector<InputPair> out;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); x++) {
        for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); y++) {
            out.emplace_back(x, y);
        }
    }
    return out;
}

template <typename Eval>
SuccessTable build_table(const Strategy& s, const FunctionTable& f, const EvalOptions& options, Eval eval) {
    SuccessTable t;
    t.n = f.n();
    t.exhaustive = !options.pairs.has_value();
    t.pairs = options.pairs ? *options.pairs : all_pairs(f.n());
    t.p.reserve(t.pairs.size());
    std::map<std::uint64_t, double> by_z;
    const bool cache = s.depends_only_on_z();
    for (auto [x, y] : t.pairs) {
        std::uint64_t z = f.eval_index(x, y);
        double v;
        if (cache) {
            auto it = by_z.find(z);
            if (it == by_z.end()) {
                it = by_z.emplace(z, eval(x, y, z)).first;
            }
            v = it->second;
        } else {
            v = eval(x, y, z);
        }
        t.p.push_back(v);
    }
    double sum = 0;
    for (double v : t.p) {
        sum += v;
    }
    t.mean = t.p.empty() ? 0.0 : sum / static_cast<double>(t.p.size());
    return t;
}

}  // namespace

double pair_attack_success(const Strategy& s, std::uint64_t x, std::uint64_t y, std::uint64_t z, double gamma,
                           RoutingCheck check) {
    if (s.kind == StrategyKind::bb84) {
        return bb84_value(s, x, y, z, gamma);
    }
    return routing_value(s, x, y, z, gamma, check);
}

SuccessTable attack_success_bb84(const Strategy& s, const FunctionTable& f, double gamma, const EvalOptions& options) {
    if (s.kind != StrategyKind::bb84) {
        throw std::invalid_argument("attack_success_bb84 needs a BB84-kind strategy");
    }
    check_compatible(s, f, gamma);
    return build_table(s, f, options,
                       [&](std::uint64_t x, std::uint64_t y, std::uint64_t z) { return bb84_value(s, x, y, z, gamma); });
}

SuccessTable attack_success_routing(const Strategy& s, const FunctionTable& f, double gamma,
                                    const EvalOptions& options) {
    if (s.kind != StrategyKind::routing) {
        throw std::invalid_argument("attack_success_routing needs a routing-kind strategy");
    }
    check_compatible(s, f, gamma);
    return build_table(s, f, options, [&](std::uint64_t x, std::uint64_t y, std::uint64_t z) {
        return routing_value(s, x, y, z, gamma, options.check);
    });
}

SuccessTable attack_success(const Strategy& s, const FunctionTable& f, double gamma, const EvalOptions& options) {
    return s.kind == StrategyKind::bb84 ? attack_success_bb84(s, f, gamma, options)
                                        : attack_success_routing(s, f, gamma, options);
}

SuccessTable product_success(const Strategy& component, int m, const FunctionTable& f, double gamma,
                             const EvalOptions& options) {
    component.validate();
    if (component.m != 1 || !component.depends_only_on_z()) {
        throw std::invalid_argument("product_success: component must be a one-round FIS strategy");
    }
    if (f.m() != m) {
        throw std::invalid_argument("product_success: f must have m output bits");
    }
    if (!(gamma >= 0 && gamma < 0.5)) {
        throw std::invalid_argument("gamma must lie in [0, 0.5)");
    }
    // Per-round success given that round's basis bit.
    double round_p[2];
    for (std::uint64_t zb = 0; zb < 2; zb++) {
        round_p[zb] = pair_attack_success(component, 0, 0, zb, 0.0, options.check);
    }
    const int budget = error_budget(gamma, m);
    return build_table(component, f, options, [&](std::uint64_t, std::uint64_t, std::uint64_t z) {
        // Failure-count distribution, truncated above the budget.
        std::vector<double> dist(static_cast<std::size_t>(budget) + 1, 0.0);
        dist[0] = 1.0;
        for (int i = 0; i < m; i++) {
            double ps = round_p[lex_bit(z, i, m)];
            for (int k = budget; k >= 0; k--) {
                dist[k] = dist[k] * ps + (k > 0 ? dist[k - 1] * (1 - ps) : 0.0);
            }
        }
        double acc = 0;
        for (int k = 0; k <= budget; k++) {
            acc += dist[k];
        }
        return std::clamp(acc, 0.0, 1.0);
    });
}

namespace {

Matrix psd_sqrt(const Matrix& e) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(e);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

template <typename Weights>
std::size_t draw_index(const Weights& w, std::size_t count, Rng& rng) {
    double total = 0;
    for (std::size_t i = 0; i < count; i++) {
        total += w(i);
    }
    double u = rng.uniform() * total;
    double acc = 0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < count; i++) {
        double wi = w(i);
        if (wi <= 0) {
            continue;
        }
        last = i;
        acc += wi;
        if (u < acc) {
            return i;
        }
    }
    return last;
}

}  // namespace

AttackSampler::AttackSampler(Strategy s, FunctionTable f, double gamma, RoutingCheck check)
    : s_(std::move(s)), f_(std::move(f)), gamma_(gamma), check_(check) {
    check_compatible(s_, f_, gamma_);
    if (s_.kind == StrategyKind::bb84) {
        for (const auto& fam : s_.alice_povms) {
            std::vector<Matrix> r;
            for (const auto& e : fam) {
                r.push_back(psd_sqrt(e));
            }
            alice_sqrt_.push_back(std::move(r));
        }
        for (const auto& fam : s_.bob_povms) {
            std::vector<Matrix> r;
            for (const auto& e : fam) {
                r.push_back(psd_sqrt(e));
            }
            bob_sqrt_.push_back(std::move(r));
        }
    }
}

bool AttackSampler::sample(Rng& rng) const {
    const int n = f_.n();
    const int m = s_.m;
    BitString bx = rng.bits(static_cast<std::size_t>(n));
    BitString by = rng.bits(static_cast<std::size_t>(n));
    const std::uint64_t x = bx.lex_index();
    const std::uint64_t y = by.lex_index();
    const std::uint64_t z = f_.eval_index(x, y);
    const int budget = error_budget(gamma_, m);

    if (s_.kind == StrategyKind::routing) {
        std::vector<int> ret;
        Amplitudes amps = routed(s_, x, y, z, ret);
        std::size_t k = draw_index([&](std::size_t i) { return std::norm(amps[static_cast<Eigen::Index>(i)]); },
                                   static_cast<std::size_t>(amps.size()), rng);
        int fails = 0;
        for (int i = 0; i < m; i++) {
            int label = static_cast<int>((k >> i) & 1) + 2 * static_cast<int>((k >> ret[i]) & 1);
            double ps = pair_success(check_, label);
            bool ok = ps == 1.0 ? true : ps == 0.0 ? false : rng.bernoulli(ps);
            fails += !ok;
        }
        return fails <= budget;
    }

    Amplitudes amps = prepared(s_, x, y);
    for (int i = 0; i < m; i++) {
        if (lex_bit(z, i, m)) {
            int t = i;
            apply_matrix(amps, gates::hadamard(), {&t, 1});
        }
    }
    Reshaped r = reshape(s_, amps);
    // Verifier measures V in the computational basis (after the H^z rotation).
    std::size_t v = draw_index([&](std::size_t i) { return r.blocks[i].squaredNorm(); }, r.blocks.size(), rng);
    Matrix c = r.blocks[v] / r.blocks[v].norm();
    const std::size_t slot = s_.response_slot(x, y, z);
    const auto& af = s_.alice_povms[slot];
    const auto& bf = s_.bob_povms[slot];
    // Alice's POVM acts on the row index of c, Bob's on the column index.
    std::size_t a = draw_index([&](std::size_t i) { return (c.conjugate().cwiseProduct(af[i] * c)).sum().real(); },
                               af.size(), rng);
    c = alice_sqrt_[slot][a] * c;
    c /= c.norm();
    std::size_t b = draw_index(
        [&](std::size_t i) { return (c.conjugate().cwiseProduct(c * bf[i].transpose())).sum().real(); }, bf.size(),
        rng);
    const std::uint64_t vlex = reverse_bits(v, static_cast<std::size_t>(m));
    return a == b && std::popcount(vlex ^ a) <= budget;
}

double operator_distance(const Matrix& a, const Matrix& b) {
    Eigen::JacobiSVD<Matrix> svd(a - b);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

namespace {

Matrix polar_unitary(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

Matrix perturb_unitary(const Matrix& u, double delta, Rng& rng) {
    Matrix g(u.rows(), u.cols());
    for (Eigen::Index i = 0; i < g.rows(); i++) {
        for (Eigen::Index j = 0; j < g.cols(); j++) {
            g(i, j) = Complex(rng.gaussian(), rng.gaussian());
        }
    }
    double gn = operator_distance(g, Matrix::Zero(g.rows(), g.cols()));
    if (gn == 0) {
        return u;
    }
    g /= gn;
    double t = delta * rng.uniform();
    for (int attempt = 0; attempt < 60; attempt++) {
        Matrix w = polar_unitary(u + t * g);
        if (operator_distance(w, u) <= delta) {
            return w;
        }
        t /= 2;
    }
    return u;
}

}  // namespace

Strategy perturb_strategy(const Strategy& s, double delta, Rng& rng) {
    if (!(delta > 0 && delta < 1)) {
        throw std::invalid_argument("perturb_strategy: delta must lie in (0, 1)");
    }
    s.validate();
    Strategy out = s;
    const Amplitudes& psi = s.state.amplitudes();
    Amplitudes g = random_amplitudes(s.total_qubits(), rng);
    double t = delta * rng.uniform();
    Amplitudes next = psi;
    for (int attempt = 0; attempt < 60; attempt++) {
        Amplitudes cand = psi + t * g;
        cand /= cand.norm();
        if ((cand - psi).norm() <= delta) {
            next = cand;
            break;
        }
        t /= 2;
    }
    out.state = StateVector(s.state.layout(), next);
    for (auto* ops : {&out.alice_unitaries, &out.bob_unitaries, &out.alice_routing, &out.bob_routing}) {
        for (auto& u : *ops) {
            u = perturb_unitary(u, delta, rng);
        }
    }
    out.validate();
    return out;
}

double good_fraction(const SuccessTable& table, double omega0) {
    if (!(omega0 > 0 && omega0 < 1)) {
        throw std::invalid_argument("good_fraction: omega0 must lie in (0, 1)");
    }
    if (table.p.empty()) {
        return 0.0;
    }
    std::size_t good = 0;
    for (double v : table.p) {
        good += v >= omega0;
    }
    return static_cast<double>(good) / static_cast<double>(table.p.size());
}

double empirical_cdf(const SuccessTable& table, double w) {
    if (table.p.empty()) {
        return 0.0;
    }
    std::size_t below = 0;
    for (double v : table.p) {
        below += v < w;
    }
    return static_cast<double>(below) / static_cast<double>(table.p.size());
}

double fis_m1_value(const StateVector& psi, int c0, int c1) {
    if (psi.num_qubits() != 1) {
        throw std::invalid_argument("fis_m1_value: expects a single-qubit state");
    }
    int q = 0;
    BitString a0(1), z0(1), a1(1), z1(1);
    a0.set(0, c0);
    a1.set(0, c1);
    z1.set(0, true);
    double p0 = project_probability(psi, projector_onto(bb84_encode(a0, z0)), {&q, 1});
    double p1 = project_probability(psi, projector_onto(bb84_encode(a1, z1)), {&q, 1});
    return (p0 + p1) / 2;
}

FisOptimum brute_force_fis_m1(int resolution, bool computational_only) {
    if (resolution < 1) {
        throw std::invalid_argument("brute_force_fis_m1: resolution must be positive");
    }
    FisOptimum best;
    best.best = -1;
    const double pi = std::numbers::pi;
    std::vector<int> ks;
    for (int k = 0; k <= resolution; k++) {
        if (!computational_only || k == 0 || k == resolution) {
            ks.push_back(k);
        }
    }
    for (int c0 = 0; c0 < 2; c0++) {
        for (int c1 = 0; c1 < 2; c1++) {
            for (int k : ks) {
                double theta = pi * k / resolution;
                for (int j = 0; j < resolution; j++) {
                    double phi = 2 * pi * j / resolution;
                    Amplitudes a(2);
                    a[0] = std::cos(theta / 2);
                    a[1] = std::polar(std::sin(theta / 2), phi);
                    StateVector psi(a / a.norm());
                    double v = fis_m1_value(psi, c0, c1);
                    best.points++;
                    best.max_seen = std::max(best.max_seen, v);
                    if (v > best.best + 1e-12) {
                        best.best = v;
                        best.theta = theta;
                        best.phi = phi;
                        best.answer_basis0 = c0;
                        best.answer_basis1 = c1;
                        best.breidbart_fidelity = fidelity(psi, breidbart_state());
                    }
                }
            }
        }
    }
    return best;
}

}  // namespace qpv
