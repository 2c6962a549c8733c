#include "turbodec/siso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "turbodec/errors.hpp"

namespace turbodec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct MapOps {
    static double combine(double acc, double x) { return lse2(acc, x); }
};

struct MaxOps {
    // Strict comparison keeps the first of tied terms.
    static double combine(double acc, double x) { return x > acc ? x : acc; }
};

inline int gamma_slot(int u, int p) { return (u << 1) | p; }

void normalize_row(double* row, int n) {
    double hi = row[0];
    for (int i = 1; i < n; ++i) hi = std::max(hi, row[i]);
    if (hi == kNegInf) return;
    for (int i = 0; i < n; ++i) row[i] -= hi;
}

template <class Ops>
void forward_core(const Trellis& tr, int k_len, SisoWorkspace& ws, std::span<double> posterior) {
    const int m = tr.memory;
    const int S = tr.num_states;
    const int T = k_len + m;

    double* alpha0 = ws.alpha_row(0);
    std::fill(alpha0, alpha0 + S, kNegInf);
    alpha0[0] = 0.0;

    for (int t = 0; t < T; ++t) {
        const double* g = ws.gamma_row(t);
        const double* ap = ws.alpha_row(t);
        double* an = ws.alpha_row(t + 1);
        const bool tail = t >= k_len;
        for (int s = 0; s < S; ++s) {
            double acc = kNegInf;
            for (const Transition& tr_in : tr.prev_transitions[s]) {
                if (tail && tr_in.input != tr.termination_input[tr_in.from]) continue;
                const int p = tr.parity_out[tr_in.from][tr_in.input];
                acc = Ops::combine(acc, ap[tr_in.from] + g[gamma_slot(tr_in.input, p)]);
            }
            an[s] = acc;
        }
        normalize_row(an, S);
    }

    double* betaT = ws.beta_row(T);
    std::fill(betaT, betaT + S, kNegInf);
    betaT[0] = 0.0;

    for (int t = T - 1; t >= 0; --t) {
        const double* g = ws.gamma_row(t);
        const double* bn = ws.beta_row(t + 1);
        double* bc = ws.beta_row(t);
        const bool tail = t >= k_len;
        for (int s = 0; s < S; ++s) {
            double acc = kNegInf;
            for (int u = 0; u < 2; ++u) {
                if (tail && u != tr.termination_input[s]) continue;
                const int p = tr.parity_out[s][u];
                acc = Ops::combine(acc, g[gamma_slot(u, p)] + bn[tr.next_state[s][u]]);
            }
            bc[s] = acc;
        }
        normalize_row(bc, S);
    }

    for (int t = 0; t < k_len; ++t) {
        const double* g = ws.gamma_row(t);
        const double* a = ws.alpha_row(t);
        const double* bn = ws.beta_row(t + 1);
        double num = kNegInf, den = kNegInf;
        for (int s = 0; s < S; ++s) {
            for (int u = 0; u < 2; ++u) {
                const int p = tr.parity_out[s][u];
                const double term = a[s] + g[gamma_slot(u, p)] + bn[tr.next_state[s][u]];
                if (u)
                    num = Ops::combine(num, term);
                else
                    den = Ops::combine(den, term);
            }
        }
        posterior[t] = num - den;
    }
}

void build_gamma(const SisoInput& in, int k_len, int m, SisoWorkspace& ws) {
    for (int t = 0; t < k_len + m; ++t) {
        const double half_su =
            t < k_len ? 0.5 * (in.sys[t] + in.prior[t]) : 0.5 * in.tail_sys[t - k_len];
        const double half_p = t < k_len ? 0.5 * in.par[t] : 0.5 * in.tail_par[t - k_len];
        double* g = ws.gamma_row(t);
        g[gamma_slot(0, 0)] = -half_su - half_p;
        g[gamma_slot(0, 1)] = -half_su + half_p;
        g[gamma_slot(1, 0)] = half_su - half_p;
        g[gamma_slot(1, 1)] = half_su + half_p;
    }
}

void check_input(const Trellis& tr, const SisoInput& in) {
    const std::size_t m = std::size_t(tr.memory);
    if (in.par.size() != in.sys.size() || in.prior.size() != in.sys.size())
        throw ContractError("siso_decode: sys/par/prior lengths differ");
    if (in.tail_sys.size() != m || in.tail_par.size() != m)
        throw ContractError("siso_decode: tail length != trellis memory");
}

void prepare_workspace(SisoWorkspace& ws, const Trellis& tr, int k_len, SisoAlgorithm alg) {
    ws.K = k_len;
    ws.memory = tr.memory;
    ws.num_states = tr.num_states;
    ws.algorithm = alg;
    ws.recorded = false;
    const std::size_t T = std::size_t(k_len + tr.memory);
    ws.alpha.resize((T + 1) * tr.num_states);
    ws.beta.resize((T + 1) * tr.num_states);
    ws.gamma.resize(T * 4);
}

// --- backward helpers ---------------------------------------------------

// Weights of up to two combined terms: softmax in map mode, all mass on
// the first argmax in max mode.
struct TermWeights {
    double w[2];
};

inline TermWeights combine_weights(SisoAlgorithm alg, const double* terms, int n) {
    TermWeights tw{{0.0, 0.0}};
    if (n == 1) {
        tw.w[0] = terms[0] == kNegInf ? 0.0 : 1.0;
        return tw;
    }
    const auto [wa, wb] = alg == SisoAlgorithm::max_log_map ? max2_grad(terms[0], terms[1])
                                                            : lse2_grad(terms[0], terms[1]);
    tw.w[0] = wa;
    tw.w[1] = wb;
    return tw;
}

}  // namespace

const char* to_string(SisoAlgorithm alg) {
    return alg == SisoAlgorithm::map ? "map" : "maxlog";
}

SisoAlgorithm algorithm_from_name(const std::string& name) {
    if (name == "map") return SisoAlgorithm::map;
    if (name == "maxlog" || name == "max-log" || name == "max_log_map")
        return SisoAlgorithm::max_log_map;
    throw ConfigError("unknown algorithm '" + name + "' (expected map or maxlog)");
}

double branch_metric(double sys_llr, double par_llr, double prior, int x_sys, int x_par, int u) {
    const double su = u ? 1.0 : -1.0;
    return 0.5 * (x_sys * sys_llr + x_par * par_llr) + 0.5 * su * prior;
}

double lse2(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = a > b ? a : b;
    const double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

std::pair<double, double> lse2_grad(double a, double b) {
    if (a == kNegInf && b == kNegInf) return {0.0, 0.0};
    if (a == kNegInf) return {0.0, 1.0};
    if (b == kNegInf) return {1.0, 0.0};
    const double wa = 1.0 / (1.0 + std::exp(b - a));
    return {wa, 1.0 - wa};
}

std::pair<double, double> max2_grad(double a, double b) {
    if (a == kNegInf && b == kNegInf) return {0.0, 0.0};
    return b > a ? std::pair{0.0, 1.0} : std::pair{1.0, 0.0};
}

double lse(std::span<const double> values) {
    double acc = kNegInf;
    for (double v : values) acc = lse2(acc, v);
    return acc;
}

double max_of(std::span<const double> values) {
    double acc = kNegInf;
    for (double v : values) acc = v > acc ? v : acc;
    return acc;
}

namespace detail {

void siso_forward_core(const Trellis& trellis, int k_len, SisoAlgorithm alg, SisoWorkspace& ws,
                       std::span<double> posterior) {
    if (alg == SisoAlgorithm::map)
        forward_core<MapOps>(trellis, k_len, ws, posterior);
    else
        forward_core<MaxOps>(trellis, k_len, ws, posterior);
}

}  // namespace detail

void siso_decode(const Trellis& trellis, const SisoInput& input, SisoAlgorithm alg,
                 std::span<double> posterior, std::span<double> extrinsic, SisoWorkspace* ws) {
    check_input(trellis, input);
    const int k_len = int(input.sys.size());
    if (posterior.size() != std::size_t(k_len) || extrinsic.size() != std::size_t(k_len))
        throw ContractError("siso_decode: output span length != K");

    SisoWorkspace local;
    SisoWorkspace& w = ws ? *ws : local;
    prepare_workspace(w, trellis, k_len, alg);
    build_gamma(input, k_len, trellis.memory, w);
    detail::siso_forward_core(trellis, k_len, alg, w, posterior);
    for (int t = 0; t < k_len; ++t) extrinsic[t] = posterior[t] - input.sys[t] - input.prior[t];
    w.recorded = ws != nullptr;
}

SisoResult siso_decode(const Trellis& trellis, const SisoInput& input, SisoAlgorithm alg,
                       SisoWorkspace* ws) {
    SisoResult r;
    r.posterior.resize(input.sys.size());
    r.extrinsic.resize(input.sys.size());
    siso_decode(trellis, input, alg, r.posterior, r.extrinsic, ws);
    return r;
}

void siso_backward(const Trellis& trellis, SisoWorkspace& ws, std::span<const double> g_posterior,
                   std::span<const double> g_extrinsic, SisoGrad& grad) {
    if (!ws.recorded)
        throw ContractError("siso_backward: workspace holds no recorded forward pass");
    const int K = ws.K;
    const int m = ws.memory;
    const int S = ws.num_states;
    const int T = K + m;
    const SisoAlgorithm alg = ws.algorithm;
    if (!g_posterior.empty() && g_posterior.size() != std::size_t(K))
        throw ContractError("siso_backward: posterior gradient length != K");
    if (!g_extrinsic.empty() && g_extrinsic.size() != std::size_t(K))
        throw ContractError("siso_backward: extrinsic gradient length != K");

    grad.sys.assign(K, 0.0);
    grad.par.assign(K, 0.0);
    grad.prior.assign(K, 0.0);
    grad.tail_sys.assign(m, 0.0);
    grad.tail_par.assign(m, 0.0);

    ws.galpha.assign(ws.alpha.size(), 0.0);
    ws.gbeta.assign(ws.beta.size(), 0.0);
    ws.ggamma.assign(ws.gamma.size(), 0.0);

    auto ga_row = [&](int t) { return ws.galpha.data() + std::size_t(t) * S; };
    auto gb_row = [&](int t) { return ws.gbeta.data() + std::size_t(t) * S; };
    auto gg_row = [&](int t) { return ws.ggamma.data() + std::size_t(t) * 4; };

    // Posterior = lse over u=1 branches minus lse over u=0 branches.
    for (int t = 0; t < K; ++t) {
        double gt = 0.0;
        if (!g_posterior.empty()) gt += g_posterior[t];
        if (!g_extrinsic.empty()) {
            gt += g_extrinsic[t];
            grad.sys[t] -= g_extrinsic[t];
            grad.prior[t] -= g_extrinsic[t];
        }
        if (gt == 0.0) continue;

        const double* g = ws.gamma_row(t);
        const double* a = ws.alpha_row(t);
        const double* bn = ws.beta_row(t + 1);
        double* ga = ga_row(t);
        double* gb = gb_row(t + 1);
        double* gg = gg_row(t);

        if (alg == SisoAlgorithm::max_log_map) {
            int best_s[2] = {-1, -1};
            double best_v[2] = {kNegInf, kNegInf};
            for (int s = 0; s < S; ++s)
                for (int u = 0; u < 2; ++u) {
                    const int p = trellis.parity_out[s][u];
                    const double term = a[s] + g[gamma_slot(u, p)] + bn[trellis.next_state[s][u]];
                    if (term > best_v[u]) {
                        best_v[u] = term;
                        best_s[u] = s;
                    }
                }
            for (int u = 0; u < 2; ++u) {
                const int s = best_s[u];
                if (s < 0) continue;  // empty path set; no gradient
                const double w = u ? gt : -gt;
                ga[s] += w;
                gb[trellis.next_state[s][u]] += w;
                gg[gamma_slot(u, trellis.parity_out[s][u])] += w;
            }
        } else {
            double num = kNegInf, den = kNegInf;
            for (int s = 0; s < S; ++s)
                for (int u = 0; u < 2; ++u) {
                    const int p = trellis.parity_out[s][u];
                    const double term = a[s] + g[gamma_slot(u, p)] + bn[trellis.next_state[s][u]];
                    if (u)
                        num = lse2(num, term);
                    else
                        den = lse2(den, term);
                }
            for (int s = 0; s < S; ++s)
                for (int u = 0; u < 2; ++u) {
                    const int p = trellis.parity_out[s][u];
                    const double term = a[s] + g[gamma_slot(u, p)] + bn[trellis.next_state[s][u]];
                    const double w = u ? gt * std::exp(term - num) : -gt * std::exp(term - den);
                    if (w == 0.0) continue;
                    ga[s] += w;
                    gb[trellis.next_state[s][u]] += w;
                    gg[gamma_slot(u, p)] += w;
                }
        }
    }

    // Reverse of the backward recursion: beta[t] was computed from
    // beta[t+1], so its adjoint flows forward in t.
    for (int t = 0; t < T; ++t) {
        const double* g = ws.gamma_row(t);
        const double* bn = ws.beta_row(t + 1);
        const double* gb = gb_row(t);
        double* gbn = gb_row(t + 1);
        double* gg = gg_row(t);
        const bool tail = t >= K;
        for (int s = 0; s < S; ++s) {
            const double adj = gb[s];
            if (adj == 0.0) continue;
            double terms[2];
            int us[2], n = 0;
            for (int u = 0; u < 2; ++u) {
                if (tail && u != trellis.termination_input[s]) continue;
                const int p = trellis.parity_out[s][u];
                terms[n] = g[gamma_slot(u, p)] + bn[trellis.next_state[s][u]];
                us[n++] = u;
            }
            const TermWeights tw = combine_weights(alg, terms, n);
            for (int i = 0; i < n; ++i) {
                const double w = adj * tw.w[i];
                if (w == 0.0) continue;
                const int u = us[i];
                gbn[trellis.next_state[s][u]] += w;
                gg[gamma_slot(u, trellis.parity_out[s][u])] += w;
            }
        }
    }

    // Reverse of the forward recursion.
    for (int t = T - 1; t >= 0; --t) {
        const double* g = ws.gamma_row(t);
        const double* ap = ws.alpha_row(t);
        const double* gan = ga_row(t + 1);
        double* gap = ga_row(t);
        double* gg = gg_row(t);
        const bool tail = t >= K;
        for (int s = 0; s < S; ++s) {
            const double adj = gan[s];
            if (adj == 0.0) continue;
            double terms[2];
            Transition trs[2];
            int n = 0;
            for (const Transition& tr_in : trellis.prev_transitions[s]) {
                if (tail && tr_in.input != trellis.termination_input[tr_in.from]) continue;
                const int p = trellis.parity_out[tr_in.from][tr_in.input];
                terms[n] = ap[tr_in.from] + g[gamma_slot(tr_in.input, p)];
                trs[n++] = tr_in;
            }
            const TermWeights tw = combine_weights(alg, terms, n);
            for (int i = 0; i < n; ++i) {
                const double w = adj * tw.w[i];
                if (w == 0.0) continue;
                gap[trs[i].from] += w;
                gg[gamma_slot(trs[i].input, trellis.parity_out[trs[i].from][trs[i].input])] += w;
            }
        }
    }

    // Branch-metric adjoints back to the inputs:
    //   gamma[u][p] = 1/2 s(u) (sys + prior) + 1/2 s(p) par   (tail: no prior)
    for (int t = 0; t < T; ++t) {
        const double* gg = gg_row(t);
        const double d_su = 0.5 * (gg[gamma_slot(1, 0)] + gg[gamma_slot(1, 1)] -
                                   gg[gamma_slot(0, 0)] - gg[gamma_slot(0, 1)]);
        const double d_p = 0.5 * (gg[gamma_slot(0, 1)] + gg[gamma_slot(1, 1)] -
                                  gg[gamma_slot(0, 0)] - gg[gamma_slot(1, 0)]);
        if (t < K) {
            grad.sys[t] += d_su;
            grad.prior[t] += d_su;
            grad.par[t] += d_p;
        } else {
            grad.tail_sys[t - K] += d_su;
            grad.tail_par[t - K] += d_p;
        }
    }
}

}  // namespace turbodec
