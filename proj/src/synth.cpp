#include "trendlink/synth.hpp"

#include "trendlink/csv.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace trendlink::synth {

namespace {

constexpr int kLeadWeeks = 60;  // quiet stretch before the first knot
constexpr int kTailWeeks = 5;
constexpr int kWindowLength = 200;
constexpr int kWindowOverlap = 10;
constexpr int kMaxDraws = 400;

const Date kEarliestInterest{2004, 1, 1};

class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream)
        : engine_([&] {
              std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                static_cast<std::uint32_t>(stream),
                                static_cast<std::uint32_t>(stream >> 32)};
              return std::mt19937_64(seq);
          }()) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    bool chance(double p) { return uniform(0.0, 1.0) < p; }
    double normal(double sd) { return std::normal_distribution<double>(0.0, sd)(engine_); }
    std::uint64_t next() { return engine_(); }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

// Undoes one exponential pass with the same start convention as des_filter.
std::vector<double> unsmooth(const std::vector<double>& s, double alpha) {
    std::vector<double> x(s.size());
    x[0] = s[0];
    for (std::size_t t = 1; t < s.size(); ++t) x[t] = (s[t] - (1.0 - alpha) * s[t - 1]) / alpha;
    return x;
}

std::vector<double> undo_des(const std::vector<double>& s, double alpha) {
    return unsmooth(unsmooth(s, alpha), alpha);
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Knots {
    std::vector<int> at;  // week offsets from the start of the interest history
    std::vector<double> level;
};

// Linear through the knots, a ramp from `start` before the first knot and a
// straight run to `end` after the last one.
std::vector<double> polyline(const Knots& k, int weeks, double start, double end) {
    std::vector<std::pair<int, double>> pts;
    if (k.at.front() > 0) pts.emplace_back(0, start);
    for (std::size_t i = 0; i < k.at.size(); ++i) pts.emplace_back(k.at[i], k.level[i]);
    if (k.at.back() < weeks - 1) pts.emplace_back(weeks - 1, end);
    std::vector<double> out(static_cast<std::size_t>(weeks));
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const auto [w0, v0] = pts[i];
        const auto [w1, v1] = pts[i + 1];
        for (int w = w0; w <= w1; ++w)
            out[static_cast<std::size_t>(w)] = v0 + (v1 - v0) * (w - w0) / double(w1 - w0);
    }
    return out;
}

struct PiecewiseDraw {
    std::vector<double> level;  // scaled to [15, 95]
    double mean_rate = 0.0;
};

// Exponential growth or decay between consecutive knots; `alternate` flips
// direction at every knot, otherwise direction changes at random.
PiecewiseDraw piecewise_levels(const std::vector<int>& at, bool alternate, Rng& rng) {
    std::vector<double> log_level = {0.0};
    double dir = rng.chance(0.5) ? 1.0 : -1.0;
    double rate_sum = 0.0;
    for (std::size_t i = 1; i < at.size(); ++i) {
        if (alternate || rng.chance(0.6)) dir = -dir;
        const double rate = rng.uniform(0.006, 0.03);
        rate_sum += rate;
        log_level.push_back(log_level.back() + dir * rate * (at[i] - at[i - 1]));
    }
    std::vector<double> lin;
    for (double l : log_level) lin.push_back(std::exp(l));
    const auto [lo, hi] = std::minmax_element(lin.begin(), lin.end());
    PiecewiseDraw d;
    for (double v : lin) d.level.push_back(15.0 + 80.0 * (v - *lo) / (*hi - *lo));
    d.mean_rate = rate_sum / static_cast<double>(at.size() - 1);
    return d;
}

std::vector<int> spaced_offsets(int count, int first, double spacing, Rng& rng) {
    std::vector<int> out = {first};
    for (int i = 1; i < count; ++i)
        out.push_back(out.back() + std::max(4, static_cast<int>(std::lround(spacing * rng.uniform(0.75, 1.25)))));
    return out;
}

std::vector<int> fit_offsets(int count, double spacing, int lo, int hi, Rng& rng) {
    auto offs = spaced_offsets(count, 0, spacing, rng);
    const int span = offs.back();
    if (span > hi - lo) {
        const double shrink = double(hi - lo) / span;
        for (auto& o : offs) o = static_cast<int>(std::floor(o * shrink));
        for (std::size_t i = 1; i < offs.size(); ++i) offs[i] = std::max(offs[i], offs[i - 1] + 1);
    }
    const int start = lo + rng.integer(0, std::max(0, hi - lo - offs.back()));
    for (auto& o : offs) o += start;
    return offs;
}

struct LagScan {
    double tau_zero = 0.0;
    std::int64_t best_lag = 0;
    double best_tau = -2.0;
    double max_tau = -2.0;
    std::vector<std::pair<std::int64_t, double>> taus;

    double best_away_from(std::int64_t lag, std::int64_t radius) const {
        double m = -2.0;
        for (const auto& [l, t] : taus)
            if (std::abs(l - lag) >= radius) m = std::max(m, t);
        return m;
    }
};

std::optional<LagScan> scan(const WeeklySeries& interest, const WeeklySeries& valuation,
                            std::int64_t founding_week) {
    const auto b = acc_lag_bounds(interest, valuation, founding_week);
    if (b.min > 0 || b.max < 0) return std::nullopt;
    LagScan s;
    for (auto lag = b.min; lag <= b.max; ++lag) {
        const auto pair = align(interest, valuation, lag);
        const auto tau = kendall_tau(pair.interest, pair.valuation);
        if (!tau) return std::nullopt;
        s.taus.emplace_back(lag, *tau);
        if (lag == 0) s.tau_zero = *tau;
        const bool better = *tau > s.best_tau ||
                            (*tau == s.best_tau && std::abs(lag) < std::abs(s.best_lag));
        if (better) {
            s.best_tau = *tau;
            s.best_lag = lag;
        }
        s.max_tau = std::max(s.max_tau, *tau);
    }
    return s;
}

bool planted_pattern_holds(const SynthConfig& cfg, const LagScan& s) {
    switch (cfg.target_group) {
        case Group::G1:
            if (s.tau_zero < 0.6) return false;
            if (cfg.latent == Latent::Logistic) return true;
            return s.best_lag == cfg.lag_weeks && s.best_tau >= 0.9 &&
                   s.best_away_from(cfg.lag_weeks, 4) <= s.best_tau - 0.05;
        case Group::G2:
            return s.best_lag == cfg.lag_weeks && s.best_tau >= 0.85 && s.tau_zero <= 0.35 &&
                   s.best_away_from(cfg.lag_weeks, 4) <= s.best_tau - 0.1;
        case Group::G3:
            return s.max_tau <= 0.35;
    }
    return false;
}

std::vector<GtWindow> split_windows(const std::string& id, std::int64_t first_week,
                                    const std::vector<double>& raw) {
    std::vector<GtWindow> out;
    const int n = static_cast<int>(raw.size());
    int start = 0;
    while (true) {
        const int end = std::min(start + kWindowLength - 1, n - 1);
        const double peak = *std::max_element(raw.begin() + start, raw.begin() + end + 1);
        GtWindow w;
        w.company_id = id;
        w.index = static_cast<int>(out.size()) + 1;
        for (int t = start; t <= end; ++t) {
            const double v = peak > 0.0 ? raw[static_cast<std::size_t>(t)] * 100.0 / peak : 0.0;
            GtPoint p;
            p.week = week_start(first_week + t);
            p.value = static_cast<int>(std::lround(v));
            p.sub_unit = v > 0.0 && p.value == 0;
            w.points.push_back(p);
        }
        w.fragment = peak <= 0.0;
        out.push_back(std::move(w));
        if (end == n - 1) break;
        start = end - kWindowOverlap + 1;
    }
    return out;
}

const std::vector<std::string> kSectors = {"Consumer", "Enterprise", "Fintech", "Health", "Mobility"};
const std::vector<std::string> kIndustries = {"E-commerce", "Software", "Payments", "Marketplace",
                                              "Media", "Hardware"};

}  // namespace

std::string to_string(Latent l) {
    return l == Latent::Logistic ? "logistic" : "piecewise-exponential";
}

Latent parse_latent(const std::string& s) {
    if (s == "logistic") return Latent::Logistic;
    if (s == "piecewise-exponential") return Latent::PiecewiseExponential;
    throw InputError(fmt::format("unknown latent '{}' (logistic, piecewise-exponential)", s));
}

void SynthConfig::validate() const {
    filter.validate();
    if (weeks < 120) throw InputError(fmt::format("weeks must be at least 120, got {}", weeks));
    if (round_count < 6) throw InputError(fmt::format("round count must be at least 6, got {}", round_count));
    if (round_count > weeks / 4)
        throw InputError(fmt::format("{} rounds are denser than {} weeks allow", round_count, weeks));
    if (std::abs(lag_weeks) * 2 >= weeks)
        throw InputError(fmt::format("|lag| {} must stay below half of {} weeks", lag_weeks, weeks));
    if (!(noise_sigma >= 0.0)) throw InputError("noise sigma must be non-negative");
    if (week_start(week_index(analysis_end) - weeks + 1) < kEarliestInterest)
        throw InputError(fmt::format("{} weeks of interest reach back before {}", weeks,
                                     kEarliestInterest.to_string()));
    switch (target_group) {
        case Group::G1:
            if (latent == Latent::Logistic && lag_weeks != 0)
                throw InputError("a monotone latent cannot carry a recoverable lag");
            break;
        case Group::G2:
            if (latent != Latent::PiecewiseExponential)
                throw InputError("a G2 venture needs the piecewise-exponential latent");
            if (std::abs(lag_weeks) < kMinPlantedShift)
                throw InputError(fmt::format("a G2 venture needs |lag| >= {}", kMinPlantedShift));
            break;
        case Group::G3:
            if (lag_weeks != 0) throw InputError("a G3 venture has no planted lag");
            break;
    }
}

Venture generate_venture(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed, 0);
    const int weeks = cfg.weeks;
    const int lag = cfg.lag_weeks;
    const std::int64_t last_week = week_index(cfg.analysis_end) - rng.integer(0, 15);
    const std::int64_t first_week = last_week - weeks + 1;

    // Valuation weeks (offsets) must keep both lag 0 and the planted lag inside the history.
    const int lo = kLeadWeeks + std::max(0, -lag);
    const int hi = weeks - 1 - kTailWeeks - std::max(0, lag);
    const int room = hi - lo;
    if (room < 4 * (cfg.round_count - 1))
        throw InputError(fmt::format("{}: {} rounds and lag {} do not fit in {} weeks",
                                     cfg.company_id, cfg.round_count, lag, weeks));
    const double max_spacing = double(room) / (cfg.round_count - 1);

    Venture v;
    v.truth.company_id = cfg.company_id;
    v.truth.planted_group = cfg.target_group;
    v.truth.planted_lag = lag;
    v.truth.latent = cfg.latent;
    v.truth.noise_sigma = cfg.noise_sigma;
    v.truth.weeks = weeks;
    v.truth.round_count = cfg.round_count;
    v.truth.unicorn = cfg.unicorn_scale;
    v.truth.poor_quality = cfg.poor_quality;

    std::vector<double> target;  // filtered interest, arbitrary units
    std::vector<double> raw_interest;
    std::vector<ValuationRound> rounds;
    bool accepted = false;
    for (int draw = 1; draw <= kMaxDraws && !accepted; ++draw) {
        v.truth.attempts = draw;
        std::vector<int> round_at;
        std::vector<double> level;  // valuation shape at each round

        if (cfg.latent == Latent::Logistic) {
            const double mid = rng.uniform(0.35, 0.65) * weeks;
            const double rate = rng.uniform(4.0, 10.0) / weeks;
            target.assign(static_cast<std::size_t>(weeks), 0.0);
            for (int t = 0; t < weeks; ++t)
                target[static_cast<std::size_t>(t)] = 3.0 + 92.0 * logistic(rate * (t - mid));
            round_at = fit_offsets(cfg.round_count, max_spacing * rng.uniform(0.5, 1.0), lo, hi, rng);
            for (int r : round_at) level.push_back(target[static_cast<std::size_t>(r + lag)]);
            v.truth.latent_rate = rate;
            v.truth.latent_shape = mid;
        } else {
            const double want = cfg.target_group == Group::G2
                                    ? std::max(std::abs(lag), 30) * rng.uniform(0.8, 1.25)
                                    : std::max(4 * std::abs(lag), 40) * rng.uniform(0.8, 1.25);
            const double spacing = std::min(want, max_spacing);
            if (spacing < 8.0)
                throw InputError(fmt::format("{}: rounds would be closer than 8 weeks", cfg.company_id));
            round_at = fit_offsets(cfg.round_count, spacing, lo, hi, rng);
            Knots k;
            for (int r : round_at) k.at.push_back(r + lag);
            const auto draw_levels = piecewise_levels(k.at, cfg.target_group == Group::G2, rng);
            k.level = draw_levels.level;
            target = polyline(k, weeks, rng.uniform(1.0, 4.0), rng.uniform(15.0, 95.0));
            level = k.level;
            v.truth.latent_rate = draw_levels.mean_rate;
            v.truth.latent_shape = static_cast<double>(k.at.size() - 1);
        }
        if (cfg.target_group == Group::G3) {
            // Valuation follows its own, unrelated curve.
            level = piecewise_levels(round_at, true, rng).level;
        }

        raw_interest = undo_des(target, cfg.filter.alpha_interest);
        if (*std::min_element(raw_interest.begin(), raw_interest.end()) < 0.5) continue;
        if (!cfg.poor_quality) {
            // Interest should build up from a quiet first year.
            const auto year = std::min<std::size_t>(52, raw_interest.size());
            const double early = std::accumulate(raw_interest.begin(), raw_interest.begin() + year, 0.0) / year;
            const double all = std::accumulate(raw_interest.begin(), raw_interest.end(), 0.0) / raw_interest.size();
            if (early > 0.6 * all) continue;
        }

        const double vmax = cfg.unicorn_scale ? 1100.0 * std::exp(rng.uniform(0.0, 2.5))
                                              : rng.uniform(30.0, 900.0);
        const double vmin = vmax * rng.uniform(0.02, 0.12);
        const auto [lv_lo, lv_hi] = std::minmax_element(level.begin(), level.end());
        std::vector<double> wanted;
        for (double l : level) wanted.push_back(vmin + (vmax - vmin) * (l - *lv_lo) / (*lv_hi - *lv_lo));
        const auto round_values = undo_des(wanted, cfg.filter.alpha_valuation_raw);
        if (*std::min_element(round_values.begin(), round_values.end()) <= 0.0) continue;
        const bool unicorn = *std::max_element(round_values.begin(), round_values.end()) >= kUnicornThreshold;
        if (unicorn != cfg.unicorn_scale) continue;

        rounds.clear();
        for (std::size_t i = 0; i < round_at.size(); ++i)
            rounds.push_back({cfg.company_id, week_start(first_week + round_at[i]).plus_days(rng.integer(0, 6)),
                              round_values[i]});

        if (cfg.poor_quality) {
            accepted = true;
            break;
        }
        ValuationSeries series{cfg.company_id, rounds, unicorn};
        const WeeklySeries interest{first_week, target, SeriesKind::FilteredInterest};
        const auto valuation = interpolate_valuation(series, cfg.filter);
        const auto s = scan(interest, valuation, first_week);
        accepted = s && planted_pattern_holds(cfg, *s);
    }
    if (!accepted)
        throw InputError(fmt::format("{}: no draw realizes the planted {} pattern (lag {}) in {} attempts",
                                     cfg.company_id, to_string(cfg.target_group), lag, kMaxDraws));

    if (cfg.poor_quality) {
        const double peak = *std::max_element(raw_interest.begin(), raw_interest.end());
        for (int t = 0; t < std::min(weeks, 52); ++t) raw_interest[static_cast<std::size_t>(t)] = peak;
    }
    if (cfg.noise_sigma > 0.0) {
        const auto [t_lo, t_hi] = std::minmax_element(target.begin(), target.end());
        const double sd = cfg.noise_sigma * (*t_hi - *t_lo);
        for (auto& x : raw_interest) x = std::max(0.0, x + rng.normal(sd));
    }

    v.company.id = cfg.company_id;
    v.company.name = "Synthetic " + cfg.company_id;
    v.company.founded = week_start(first_week).plus_days(rng.integer(0, 6));
    if (v.company.founded > rounds.front().date) v.company.founded = rounds.front().date;
    v.company.is_b2c = rng.chance(0.5);
    v.company.is_platform = rng.chance(0.5);
    v.company.sector = kSectors[static_cast<std::size_t>(rng.integer(0, int(kSectors.size()) - 1))];
    v.company.industry = kIndustries[static_cast<std::size_t>(rng.integer(0, int(kIndustries.size()) - 1))];

    v.windows = split_windows(cfg.company_id, first_week, raw_interest);
    v.valuation = ValuationSeries{cfg.company_id, rounds, derive_unicorn(rounds)};
    v.metadata = cfg.poor_quality ? GtMetadata{cfg.company_id, false, CategoryGroup::B, 0}
                                  : GtMetadata{cfg.company_id, true, CategoryGroup::A, 20};
    return v;
}

void CorpusConfig::validate() const {
    if (venture_count < 1) throw InputError("venture count must be positive");
    if (std::any_of(group_mix.begin(), group_mix.end(), [](double p) { return !(p >= 0.0); }) ||
        !(group_mix[0] + group_mix[1] + group_mix[2] > 0.0))
        throw InputError("group mix needs non-negative shares with a positive sum");
    if (min_weeks < 120 || min_weeks > max_weeks) throw InputError("invalid weeks range");
    if (min_rounds < 6 || min_rounds > max_rounds) throw InputError("invalid rounds range");
    if (min_shift < kMinPlantedShift || min_shift > max_shift)
        throw InputError(fmt::format("G2 shift range must start at {} or more", kMinPlantedShift));
    if (!(noise_sigma >= 0.0)) throw InputError("noise sigma must be non-negative");
    if (!(unicorn_share >= 0.0 && unicorn_share <= 1.0)) throw InputError("unicorn share must lie in [0, 1]");
    if (poor_quality_count < 0 || short_round_count < 0 ||
        poor_quality_count + short_round_count > venture_count)
        throw InputError("special venture counts exceed the corpus size");
}

SyntheticCorpus generate_corpus(const CorpusConfig& cfg) {
    cfg.validate();
    const double total = cfg.group_mix[0] + cfg.group_mix[1] + cfg.group_mix[2];
    const int n = cfg.venture_count;
    const int n1 = static_cast<int>(std::lround(n * cfg.group_mix[0] / total));
    const int n2 = std::min(n - n1, static_cast<int>(std::lround(n * cfg.group_mix[1] / total)));
    std::vector<Group> groups;
    groups.insert(groups.end(), static_cast<std::size_t>(n1), Group::G1);
    groups.insert(groups.end(), static_cast<std::size_t>(n2), Group::G2);
    groups.insert(groups.end(), static_cast<std::size_t>(n - n1 - n2), Group::G3);
    Rng order(cfg.seed, 0);
    std::shuffle(groups.begin(), groups.end(), order.engine());

    SyntheticCorpus out;
    for (int i = 0; i < n; ++i) {
        const auto id = fmt::format("v{:04d}", i + 1);
        Rng rng(cfg.seed, static_cast<std::uint64_t>(i) + 1);
        std::optional<Venture> venture;
        for (int retry = 0; retry < 20 && !venture; ++retry) {
            SynthConfig sc;
            sc.seed = rng.next();
            sc.company_id = id;
            sc.analysis_end = cfg.analysis_end;
            sc.weeks = rng.integer(cfg.min_weeks, cfg.max_weeks);
            sc.round_count = std::min(rng.integer(cfg.min_rounds, cfg.max_rounds), sc.weeks / 4);
            sc.target_group = groups[static_cast<std::size_t>(i)];
            sc.noise_sigma = cfg.noise_sigma;
            sc.unicorn_scale = rng.chance(cfg.unicorn_share);
            sc.poor_quality = i < cfg.poor_quality_count;
            switch (sc.target_group) {
                case Group::G1:
                    sc.latent = rng.chance(0.7) ? Latent::Logistic : Latent::PiecewiseExponential;
                    break;
                case Group::G2: {
                    sc.latent = Latent::PiecewiseExponential;
                    const int shift = rng.integer(cfg.min_shift, cfg.max_shift);
                    sc.lag_weeks = rng.chance(0.5) ? -shift : shift;
                    break;
                }
                case Group::G3:
                    sc.latent = Latent::Logistic;
                    break;
            }
            try {
                venture = generate_venture(sc);
            } catch (const InputError&) {
                if (retry == 19) throw;
            }
        }
        auto& v = *venture;
        if (i >= cfg.poor_quality_count && i < cfg.poor_quality_count + cfg.short_round_count) {
            v.valuation.rounds.resize(5);
            v.valuation.is_unicorn = derive_unicorn(v.valuation.rounds);
            v.truth.round_count = 5;
            v.truth.unicorn = v.valuation.is_unicorn;
        }
        out.corpus.companies.push_back(v.company);
        out.corpus.valuations[id] = v.valuation;
        out.corpus.metadata[id] = {v.metadata};
        out.corpus.windows[id] = v.windows;
        out.truths.push_back(v.truth);
    }
    return out;
}

namespace {
const std::vector<std::string> kTruthHeader = {"company_id", "group", "lag_weeks", "latent",
                                               "noise_sigma", "weeks", "round_count", "unicorn",
                                               "poor_quality", "latent_rate", "latent_shape",
                                               "attempts"};
}  // namespace

void write_truth(const std::filesystem::path& path, const std::vector<SynthTruth>& truths) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& t : truths)
        rows.push_back({t.company_id, to_string(t.planted_group), std::to_string(t.planted_lag),
                        to_string(t.latent), csv::format_exact(t.noise_sigma), std::to_string(t.weeks),
                        std::to_string(t.round_count), t.unicorn ? "true" : "false",
                        t.poor_quality ? "true" : "false", csv::format_exact(t.latent_rate),
                        csv::format_exact(t.latent_shape), std::to_string(t.attempts)});
    csv::write(path, kTruthHeader, rows);
}

std::vector<SynthTruth> read_truth(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    csv::require_header(table, kTruthHeader, path.string());
    std::vector<SynthTruth> out;
    for (const auto& row : table.rows) {
        const auto& f = row.fields;
        try {
            SynthTruth t;
            t.company_id = f[0];
            t.planted_group = parse_group(f[1]);
            t.planted_lag = std::stoi(f[2]);
            t.latent = parse_latent(f[3]);
            t.noise_sigma = std::stod(f[4]);
            t.weeks = std::stoi(f[5]);
            t.round_count = std::stoi(f[6]);
            t.unicorn = f[7] == "true";
            t.poor_quality = f[8] == "true";
            t.latent_rate = std::stod(f[9]);
            t.latent_shape = std::stod(f[10]);
            t.attempts = std::stoi(f[11]);
            out.push_back(std::move(t));
        } catch (const std::logic_error&) {
            throw InputError(fmt::format("{}:{}: malformed truth row", path.string(), row.line));
        }
    }
    return out;
}

void write_synthetic_corpus(const std::filesystem::path& dir, const SyntheticCorpus& corpus) {
    write_corpus(dir, corpus.corpus);
    write_truth(dir / "truth.csv", corpus.truths);
}

RecoveryReport evaluate_recovery(const std::vector<SynthTruth>& truths,
                                 const std::vector<CorrelationResult>& results) {
    std::map<std::string, const CorrelationResult*> by_id;
    for (const auto& r : results) by_id[r.company_id] = &r;
    if (by_id.size() != truths.size())
        throw InputError(fmt::format("recovery: {} truths but {} results", truths.size(), by_id.size()));
    RecoveryReport rep;
    std::int64_t abs_sum = 0;
    for (const auto& t : truths) {
        const auto it = by_id.find(t.company_id);
        if (it == by_id.end()) throw InputError(fmt::format("recovery: no result for '{}'", t.company_id));
        const auto& r = *it->second;
        rep.confusion[static_cast<std::size_t>(t.planted_group)][static_cast<std::size_t>(r.group)] += 1;
        ++rep.total;
        if (r.group == t.planted_group) ++rep.correct;
        if (t.planted_group == Group::G2) {
            const auto err = r.lag_weeks - t.planted_lag;
            rep.lag_errors.push_back(err);
            abs_sum += std::abs(err);
            rep.max_abs_lag_error = std::max<std::int64_t>(rep.max_abs_lag_error, std::abs(err));
        }
    }
    rep.accuracy = rep.total ? double(rep.correct) / double(rep.total) : 0.0;
    if (!rep.lag_errors.empty()) rep.mean_abs_lag_error = double(abs_sum) / double(rep.lag_errors.size());
    return rep;
}

}  // namespace trendlink::synth
