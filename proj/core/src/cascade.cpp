#include "crisisnet/cascade.hpp"

#include <algorithm>
#include <cmath>

namespace crisisnet {

void CascadeParams::validate() const {
    if (!(f > 0.0) || f > 1.0) throw Error("cascade parameter f must be in (0,1]");
    if (!(t > 0.0) || t > 1.0) throw Error("cascade parameter t must be in (0,1]");
}

CascadeParams CascadeParams::from_ratio(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw Error("f/t ratio must be positive and finite");
    CascadeParams p;
    if (r <= 10.0) {
        p.t = 0.1;
        p.f = 0.1 * r;
    } else {
        p.f = 1.0;
        p.t = 1.0 / r;
    }
    return p;
}

const char* to_string(Side s) { return s == Side::IN ? "IN" : "OUT"; }
const char* to_string(Cause c) { return c == Cause::DIRECT ? "DIRECT" : "INDIRECT"; }
const char* to_string(Label l) {
    switch (l) {
        case Label::ONE_STEP_DIRECT: return "ONE_STEP_DIRECT";
        case Label::MULTI_STEP_DIRECT: return "MULTI_STEP_DIRECT";
        case Label::INDIRECT: return "INDIRECT";
        case Label::RESIDUAL: return "RESIDUAL";
    }
    return "?";
}

Side side_from_string(const std::string& s) {
    if (s == "IN") return Side::IN;
    if (s == "OUT") return Side::OUT;
    throw Error("unknown side '" + s + "'");
}

Cause cause_from_string(const std::string& s) {
    if (s == "DIRECT") return Cause::DIRECT;
    if (s == "INDIRECT") return Cause::INDIRECT;
    throw Error("unknown cause '" + s + "'");
}

Label label_from_string(const std::string& s) {
    if (s == "ONE_STEP_DIRECT") return Label::ONE_STEP_DIRECT;
    if (s == "MULTI_STEP_DIRECT") return Label::MULTI_STEP_DIRECT;
    if (s == "INDIRECT") return Label::INDIRECT;
    if (s == "RESIDUAL") return Label::RESIDUAL;
    throw Error("unknown label '" + s + "'");
}

namespace {

// Classification works off the final decrement state of the collapsing
// country: contributions are f*W(original) per collapsed neighbor on the
// crossing side, so they can be recomputed exactly when the event fires.
struct EngineState {
    std::vector<int> step_of;   // -1 live, 0 seed, >=1 collapse round
    std::vector<double> din;    // cumulative in-side decrement felt
    std::vector<double> dout;   // cumulative out-side decrement felt
    std::vector<Label> label_of;
};

CollapseEvent classify(const MacroNet& net, const EngineState& st, int j, int step, int seed_idx,
                       double f, double threshold) {
    const bool in_crossed = st.din[static_cast<std::size_t>(j)] > threshold;
    const bool out_crossed = st.dout[static_cast<std::size_t>(j)] > threshold;
    // Side tie-break: larger decrement relative to the (shared) threshold,
    // ties resolved to IN.
    Side side;
    if (in_crossed && out_crossed)
        side = st.dout[static_cast<std::size_t>(j)] > st.din[static_cast<std::size_t>(j)]
                   ? Side::OUT
                   : Side::IN;
    else
        side = in_crossed ? Side::IN : Side::OUT;

    // Collapsed-neighbor contributions on the crossing side.
    const auto& arcs = side == Side::IN ? net.in(j) : net.out(j);
    struct Contrib {
        int node;
        double value;
    };
    std::vector<Contrib> sufficient;
    for (const auto& a : arcs) {
        if (st.step_of[static_cast<std::size_t>(a.node)] < 0) continue; // live
        const double contribution = f * a.w;
        if (contribution > threshold) sufficient.push_back({a.node, contribution});
    }

    CollapseEvent ev;
    ev.country = net.country(j).code;
    ev.step = step;
    ev.side = side;
    if (sufficient.empty()) {
        ev.cause = Cause::INDIRECT;
        ev.label = Label::INDIRECT;
        return ev;
    }
    // Trigger: largest sufficient contribution; ties to the earlier collapse
    // step, then the lexicographically smaller code (= smaller index).
    std::sort(sufficient.begin(), sufficient.end(), [&](const Contrib& a, const Contrib& b) {
        if (a.value != b.value) return a.value > b.value;
        const int sa = st.step_of[static_cast<std::size_t>(a.node)];
        const int sb = st.step_of[static_cast<std::size_t>(b.node)];
        if (sa != sb) return sa < sb;
        return a.node < b.node;
    });
    const int trig = sufficient.front().node;
    ev.cause = Cause::DIRECT;
    ev.trigger = net.country(trig).code;
    if (trig == seed_idx) {
        ev.label = Label::ONE_STEP_DIRECT;
    } else {
        const Label tl = st.label_of[static_cast<std::size_t>(trig)];
        ev.label = (tl == Label::ONE_STEP_DIRECT || tl == Label::MULTI_STEP_DIRECT)
                       ? Label::MULTI_STEP_DIRECT
                       : Label::RESIDUAL;
    }
    return ev;
}

} // namespace

AvalancheResult run_avalanche(const MacroNet& net, const std::string& seed, CascadeParams params) {
    params.validate();
    const int seed_idx = net.require_index(seed);
    const int n = net.n();
    for (int i = 0; i < n; ++i) {
        if (!(net.capacity(i) > 0.0))
            throw Error("country '" + net.country(i).code +
                        "' has non-positive capacity; collapse threshold undefined");
    }

    EngineState st;
    st.step_of.assign(static_cast<std::size_t>(n), -1);
    st.din.assign(static_cast<std::size_t>(n), 0.0);
    st.dout.assign(static_cast<std::size_t>(n), 0.0);
    st.label_of.assign(static_cast<std::size_t>(n), Label::INDIRECT);

    AvalancheResult result;
    result.seed = seed;
    st.step_of[static_cast<std::size_t>(seed_idx)] = 0;

    std::vector<int> frontier = {seed_idx};
    std::vector<int> touched; // live nodes whose decrements changed, candidates for collapse
    std::vector<char> in_touched(static_cast<std::size_t>(n), 0);

    int step = 0;
    while (!frontier.empty()) {
        ++step;
        touched.clear();
        for (int i : frontier) {
            // i collapsed last round: its incident links lose f*W, felt as an
            // in-side decrement by importers and out-side by exporters.
            for (const auto& a : net.out(i)) {
                if (st.step_of[static_cast<std::size_t>(a.node)] >= 0) continue;
                st.din[static_cast<std::size_t>(a.node)] += params.f * a.w;
                if (!in_touched[static_cast<std::size_t>(a.node)]) {
                    in_touched[static_cast<std::size_t>(a.node)] = 1;
                    touched.push_back(a.node);
                }
            }
            for (const auto& a : net.in(i)) {
                if (st.step_of[static_cast<std::size_t>(a.node)] >= 0) continue;
                st.dout[static_cast<std::size_t>(a.node)] += params.f * a.w;
                if (!in_touched[static_cast<std::size_t>(a.node)]) {
                    in_touched[static_cast<std::size_t>(a.node)] = 1;
                    touched.push_back(a.node);
                }
            }
        }
        frontier.clear();
        std::sort(touched.begin(), touched.end()); // canonical event order within the round
        for (int j : touched) {
            in_touched[static_cast<std::size_t>(j)] = 0;
            const double threshold = params.t * net.capacity(j);
            if (st.din[static_cast<std::size_t>(j)] > threshold ||
                st.dout[static_cast<std::size_t>(j)] > threshold) {
                CollapseEvent ev = classify(net, st, j, step, seed_idx, params.f, threshold);
                st.label_of[static_cast<std::size_t>(j)] = ev.label;
                result.profile[static_cast<std::size_t>(ev.label)]++;
                result.events.push_back(std::move(ev));
                frontier.push_back(j);
            }
        }
        // Mark collapses only after the whole round is classified so that
        // same-round contributors are not counted (they act next round).
        for (int j : frontier) st.step_of[static_cast<std::size_t>(j)] = step;
    }

    result.size = static_cast<int>(result.events.size());
    result.duration = result.events.empty() ? 0 : result.events.back().step;
    return result;
}

std::map<std::string, AvalancheResult> run_all(const MacroNet& net, CascadeParams params) {
    params.validate();
    std::map<std::string, AvalancheResult> results;
    for (int i = 0; i < net.n(); ++i) {
        const std::string& code = net.country(i).code;
        results.emplace(code, run_avalanche(net, code, params));
    }
    return results;
}

CumulativeCurve cumulative_counts_from_sizes(const std::vector<int>& sizes) {
    if (sizes.empty()) throw Error("cumulative_size_counts: empty results");
    const int max_size = *std::max_element(sizes.begin(), sizes.end());
    std::vector<long> ge(static_cast<std::size_t>(max_size) + 2, 0);
    for (int s : sizes) ge[static_cast<std::size_t>(s)]++;
    for (int a = max_size - 1; a >= 0; --a) ge[static_cast<std::size_t>(a)] += ge[static_cast<std::size_t>(a) + 1];
    CumulativeCurve curve;
    curve.reserve(static_cast<std::size_t>(max_size) + 1);
    for (int a = 0; a <= max_size; ++a) curve.emplace_back(a, ge[static_cast<std::size_t>(a)]);
    return curve;
}

CumulativeCurve cumulative_size_counts(const std::map<std::string, AvalancheResult>& results) {
    std::vector<int> sizes;
    sizes.reserve(results.size());
    for (const auto& [_, r] : results) sizes.push_back(r.size);
    return cumulative_counts_from_sizes(sizes);
}

FitRange default_fit_range(const CumulativeCurve& curve) {
    FitRange range;
    range.a_min = 1;
    range.a_max = 1;
    for (const auto& [a, count] : curve)
        if (a >= 1 && count >= 2) range.a_max = std::max(range.a_max, a);
    return range;
}

double tail_exponent(const CumulativeCurve& curve, FitRange range) {
    std::vector<std::pair<double, double>> pts; // (log10(A+1), log10(count))
    for (const auto& [a, count] : curve) {
        if (a < range.a_min || a > range.a_max || count <= 0) continue;
        pts.emplace_back(std::log10(static_cast<double>(a) + 1.0),
                         std::log10(static_cast<double>(count)));
    }
    if (pts.size() < 3) throw Error("tail_exponent: need at least 3 points in the fit range");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) <= 1e-12 * std::max(1.0, n * sxx))
        throw Error("tail_exponent: degenerate abscissa");
    return (n * sxy - sx * sy) / denom;
}

SweepResult sweep(const MacroNet& net, const std::vector<double>& ratios) {
    if (ratios.empty()) throw Error("sweep: empty ratio grid");
    SweepResult out;
    const int n = net.n();
    double best = 0.0;
    for (const double r : ratios) {
        const CascadeParams params = CascadeParams::from_ratio(r);
        std::vector<int> sizes;
        sizes.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            sizes.push_back(run_avalanche(net, net.country(i).code, params).size);

        SweepRow row;
        row.ratio = r;
        row.f = params.f;
        row.t = params.t;
        row.max_size = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
        row.sum_sizes = 0;
        for (int s : sizes) row.sum_sizes += s;
        row.decades = std::log10(static_cast<double>(row.max_size) + 1.0);
        const CumulativeCurve curve = cumulative_counts_from_sizes(sizes);
        try {
            row.tail_slope = tail_exponent(curve, default_fit_range(curve));
        } catch (const Error&) {
            row.tail_slope.reset();
        }
        if (row.max_size < 0.05 * n) {
            if (!out.subcritical_max_ratio || r > *out.subcritical_max_ratio)
                out.subcritical_max_ratio = r;
        }
        if (row.max_size > 0.5 * n) {
            if (!out.supercritical_min_ratio || r < *out.supercritical_min_ratio)
                out.supercritical_min_ratio = r;
        }
        if (row.tail_slope) {
            const double score = std::fabs(*row.tail_slope + 1.0);
            if (!out.critical_ratio || score < best) {
                out.critical_ratio = r;
                best = score;
            }
        }
        out.rows.push_back(row);
    }
    // A one-point grid can at best confirm a regime, never locate the
    // transition; a grid with no usable tail fit has no estimate at all.
    if (ratios.size() == 1 || !out.critical_ratio) out.low_confidence = true;
    return out;
}

std::vector<double> log_ratio_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi >= lo) || points < 1) throw Error("malformed ratio grid");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        grid.push_back(lo);
        return grid;
    }
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i < points; ++i)
        grid.push_back(std::pow(10.0, llo + (lhi - llo) * i / (points - 1)));
    return grid;
}

} // namespace crisisnet
