#include "swarmshape/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "swarmshape/covariance_control.hpp"
#include "swarmshape/errors.hpp"
#include "swarmshape/physics.hpp"
#include "swarmshape/position_control.hpp"
#include "swarmshape/settle.hpp"

namespace swarmshape {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

std::optional<double> parse_number(std::string_view s) {
    // Accepts decimals and simple fractions such as 2/3.
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const auto num = parse_number(trim(s.substr(0, slash)));
        const auto den = parse_number(trim(s.substr(slash + 1)));
        if (!num || !den || *den == 0.0) return std::nullopt;
        return *num / *den;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::string fmt_num(double v) { return fmt::format("{}", v); }

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt_num(v[i]);
    return s;
}

// Reads typed parameters, recording the resolved value of each; finish()
// rejects whatever was never read.
class Params {
public:
    explicit Params(const std::map<std::string, std::string>& raw) : raw_(raw) {}

    double num(const std::string& key, double def, double lo, double hi) {
        const double v = raw_.count(key) ? number_of(key, raw_.at(key)) : def;
        check_range(key, v, lo, hi);
        resolved[key] = fmt_num(v);
        return v;
    }

    int integer(const std::string& key, int def, int lo, int hi) {
        const double v = raw_.count(key) ? number_of(key, raw_.at(key)) : def;
        if (v != std::floor(v)) throw ValidationError(key + " must be an integer");
        check_range(key, v, lo, hi);
        resolved[key] = fmt_num(v);
        return static_cast<int>(v);
    }

    std::vector<double> list(const std::string& key, std::vector<double> def, double lo, double hi) {
        std::vector<double> v = std::move(def);
        if (raw_.count(key)) {
            v.clear();
            for (std::string_view item : split(raw_.at(key), ',')) v.push_back(number_of(key, item));
        }
        if (v.empty()) throw ValidationError(key + " must not be empty");
        for (double x : v) check_range(key, x, lo, hi);
        resolved[key] = join(v);
        return v;
    }

    std::string choice(const std::string& key, const std::string& def, std::initializer_list<std::string_view> opts) {
        const std::string v = raw_.count(key) ? raw_.at(key) : def;
        if (std::find(opts.begin(), opts.end(), v) == opts.end())
            throw ValidationError(key + ": unsupported value '" + v + "'");
        resolved[key] = v;
        return v;
    }

    std::optional<Vec2> point(const std::string& key) {
        if (!raw_.count(key)) return std::nullopt;
        const auto parts = split(raw_.at(key), ',');
        if (parts.size() != 2) throw ValidationError(key + " must be 'x,y'");
        const Vec2 p{number_of(key, parts[0]), number_of(key, parts[1])};
        resolved[key] = fmt_num(p.x) + "," + fmt_num(p.y);
        return p;
    }

    bool has(const std::string& key) const { return raw_.count(key) > 0; }

    void finish() const {
        for (const auto& [k, v] : raw_)
            if (!resolved.count(k)) throw ValidationError("unknown key '" + k + "'");
    }

    std::map<std::string, std::string> resolved;

private:
    static double number_of(const std::string& key, std::string_view text) {
        const auto v = parse_number(trim(text));
        if (!v) throw ValidationError(key + ": not a number: '" + std::string(text) + "'");
        return *v;
    }

    static void check_range(const std::string& key, double v, double lo, double hi) {
        if (!(v >= lo && v <= hi)) throw ValidationError(fmt::format("{} = {} outside [{}, {}]", key, v, lo, hi));
    }

    const std::map<std::string, std::string>& raw_;
};

constexpr double kPi = std::numbers::pi;

std::string moments_csv_row(const Moments& m) {
    return fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}", m.mean_x, m.mean_y, m.var_x, m.var_y,
                       m.cov_xy, m.corr);
}

// ---------------------------------------------------------------------------

ScenarioOutput settle_sweep(Params& p, Workspace2D ws) {
    const bool square = ws == Workspace2D::square;
    const auto fills = square ? p.list("A", {0.1, 0.3, 0.5, 0.7, 0.9}, 1e-9, 1.0)
                              : p.list("h", {0.25, 0.5, 1.0, 1.5, 1.75}, 1e-9, 2.0);
    const int samples = p.integer("beta_samples", 360, 1, 1000000);
    p.finish();

    const auto rows = sweep_statistics(ws, fills, samples);
    std::string csv = std::string(square ? "A" : "h") + ",beta,mean_x,mean_y,var_x,var_y,cov_xy,corr\n";
    for (const SweepRow& r : rows) csv += fmt::format("{},{:.12g},{}\n", fmt_num(r.fill), r.beta, moments_csv_row(r.moments));

    std::string summary = fmt::format("{:>8} {:>10} {:>10} {:>10} {:>10}\n", square ? "A" : "h", "max var_x",
                                      "min var_x", "max cov", "min cov");
    for (double f : fills) {
        double vmax = -1e300, vmin = 1e300, cmax = -1e300, cmin = 1e300;
        for (const SweepRow& r : rows) {
            if (r.fill != f) continue;
            vmax = std::max(vmax, r.moments.var_x);
            vmin = std::min(vmin, r.moments.var_x);
            cmax = std::max(cmax, r.moments.cov_xy);
            cmin = std::min(cmin, r.moments.cov_xy);
        }
        summary += fmt::format("{:>8.4g} {:>10.6f} {:>10.6f} {:>10.6f} {:>10.6f}\n", f, vmax, vmin, cmax, cmin);
    }
    ScenarioOutput out;
    out.files.push_back({square ? "square_sweep.csv" : "circle_sweep.csv", std::move(csv)});
    out.summary = std::move(summary);
    return out;
}

ScenarioOutput two_robot(Params& p, std::uint64_t seed) {
    const double L = p.num("L", 1.0, 1e-6, 1e9);
    const auto s1 = p.point("s1"), s2 = p.point("s2"), e1 = p.point("e1"), e2 = p.point("e2");
    const bool explicit_task = s1 || s2 || e1 || e2;
    if (explicit_task && !(s1 && s2 && e1 && e2)) throw ValidationError("give all of s1, s2, e1, e2 or none");
    if (explicit_task && p.has("tasks")) throw ValidationError("tasks cannot be combined with an explicit task");
    const int count = explicit_task ? 1 : p.integer("tasks", 100, 1, 1000000);
    p.finish();

    std::vector<TwoRobotTask> tasks;
    if (explicit_task) {
        tasks.push_back({*s1, *s2, *e1, *e2, L});
    } else {
        CounterRng rng(seed);
        for (int i = 0; i < count; ++i) {
            const auto base = 8 * static_cast<std::uint64_t>(i);
            auto u = [&](std::uint64_t k) { return L * rng.uniform(base + k); };
            tasks.push_back({{u(0), u(1)}, {u(2), u(3)}, {u(4), u(5)}, {u(6), u(7)}, L});
        }
    }
    std::string csv = "task,s1x,s1y,s2x,s2y,e1x,e1y,e2x,e2y,moves,distance,rounds_x,rounds_y,max_error\n";
    ScenarioOutput out;
    int max_rounds = 0;
    double total = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const TwoRobotTask& t = tasks[i];
        const TwoRobotPlan plan = arrange_two_robots(t);
        const double err = std::max((plan.final_state.positions[0] - t.e1).norm(),
                                    (plan.final_state.positions[1] - t.e2).norm());
        const double dist = total_distance(plan.moves);
        csv += fmt::format("{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{},{:.12g},{},{},{:.3g}\n", i,
                           t.s1.x, t.s1.y, t.s2.x, t.s2.y, t.e1.x, t.e1.y, t.e2.x, t.e2.y, plan.moves.size(), dist,
                           plan.rounds_x, plan.rounds_y, err);
        max_rounds = std::max({max_rounds, plan.rounds_x, plan.rounds_y});
        total += dist;
        worst = std::max(worst, err);
        if (i == 0) {
            std::ostringstream os;
            write_plan(os, plan.moves);
            out.files.push_back({"plan.txt", os.str()});
        }
    }
    out.files.push_back({"two_robot.csv", std::move(csv)});
    out.summary = fmt::format("tasks {}  mean distance {:.6f}  max rounds/axis {}  max goal error {:.3g}\n",
                              tasks.size(), total / static_cast<double>(tasks.size()), max_rounds, worst);
    return out;
}

ScenarioOutput n_robot(Params& p, std::uint64_t seed) {
    const auto ns = p.list("n", {8}, 1, 5000);
    const std::string shape = p.choice("shape", "grid", {"grid", "random"});
    const auto eps_list = p.list("clearance", {2}, 2, 1000);
    const int layout = p.integer("layout_clearance", 0, 0, 1000);
    const int trace = p.integer("trace", 1, 0, 1);
    p.finish();
    for (double v : ns)
        if (v != std::floor(v)) throw ValidationError("n must be integers");
    for (double v : eps_list)
        if (v != std::floor(v)) throw ValidationError("clearance must be integers");
    const bool single = ns.size() == 1 && eps_list.size() == 1;

    ScenarioOutput out;
    std::string csv = "n,clearance,moves,distance,loops\n";
    out.summary = fmt::format("{:>6} {:>9} {:>8} {:>12}\n", "n", "clearance", "moves", "distance");
    for (double nv : ns) {
        const auto cells = shape_cells(shape, static_cast<int>(nv), seed);
        for (double ev : eps_list) {
            const Zones z = make_column_zones(cells, static_cast<int>(ev), layout);
            const NRobotPlan plan = arrange_n_robots(z);
            const double dist = total_distance(plan.moves);
            csv += fmt::format("{},{},{},{},{}\n", nv, ev, plan.moves.size(), dist, plan.loops);
            out.summary += fmt::format("{:>6} {:>9} {:>8} {:>12}\n", nv, ev, plan.moves.size(), dist);
            if (!single) continue;
            std::ostringstream os;
            os << fmt::format("# workspace {} x {}, clearance {}\n", z.world.width, z.world.height, z.clearance);
            write_plan(os, plan.moves);
            out.files.push_back({"plan.txt", os.str()});
            if (trace) {
                std::string rep = "move,robot_id,x,y\n";
                GridState st = z.starts;
                auto dump = [&](std::size_t m) {
                    for (std::size_t r = 0; r < st.size(); ++r) rep += fmt::format("{},{},{},{}\n", m, r, st[r].x, st[r].y);
                };
                dump(0);
                for (std::size_t m = 0; m < plan.moves.size(); ++m) {
                    MoveSequence one;
                    one.commands.push_back(plan.moves.commands[m]);
                    st = grid_replay(z.world, std::move(st), one);
                    dump(m + 1);
                }
                out.files.push_back({"replay.csv", std::move(rep)});
            }
        }
    }
    out.files.push_back({"distances.csv", std::move(csv)});
    return out;
}

struct DiscSetup {
    int n;
    double radius, width, height, force;
    SimParams sim;
};

DiscSetup disc_setup(Params& p, double width, double height) {
    DiscSetup d;
    d.n = p.integer("n", 144, 2, 100000);
    d.radius = p.num("radius", 4.0, 1e-6, 1e6);
    d.width = p.num("width", width, 1e-6, 1e9);
    d.height = p.num("height", height, 1e-6, 1e9);
    d.force = p.num("force", 40.0, 0.0, 1e9);
    d.sim.dt = p.num("dt", 1.0 / 240.0, 1e-9, 1.0);
    d.sim.mobility = p.num("mobility", 1.0, 1e-9, 1e9);
    d.sim.stiffness = p.num("stiffness", 4000.0, 1e-9, 1e12);
    return d;
}

ScenarioOutput open_loop(Params& p, std::uint64_t seed) {
    DiscSetup d = disc_setup(p, 480.0, 240.0);
    const auto fractions = p.list("friction_fractions", {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}, 0.0, 1e6);
    const double settle = p.num("settle", 2.5, 0.0, 1e6);
    const double slide = p.num("slide", 3.0, 0.0, 1e6);
    const int record_every = p.integer("record_every", 24, 1, 1000000);
    const int frame_every = p.integer("frame_every", 0, 0, 1000000);
    p.finish();

    d.sim.seed = seed;
    const DiscSwarm initial = hex_swarm(d.n, d.radius, d.width, d.height, seed);
    // Settle on the floor, then shear right, left and right again at 45
    // degrees into the floor, staying clear of the side walls.
    const std::vector<ControlInput> program{{d.force, -kPi / 2, settle},
                                            {d.force, -kPi / 4, slide},
                                            {d.force, -3 * kPi / 4, 2 * slide},
                                            {d.force, -kPi / 4, slide}};
    std::vector<double> mus;
    for (double f : fractions) mus.push_back(mu_for_friction_fraction(f));
    const auto traces = run_open_loop(initial, program, d.sim, mus, record_every, frame_every);

    ScenarioOutput out;
    std::string exc = "friction_fraction,mu_f,cov_excursion\n";
    out.summary = fmt::format("{:>10} {:>10} {:>14}\n", "F_f / F", "mu_f", "cov excursion");
    for (std::size_t i = 0; i < traces.size(); ++i) {
        std::ostringstream os;
        write_stats_csv(os, traces[i]);
        out.files.push_back({fmt::format("stats_{}.csv", i), os.str()});
        if (frame_every > 0) {
            std::ostringstream ts;
            write_trajectory_csv(ts, traces[i].frames);
            out.files.push_back({fmt::format("trajectory_{}.csv", i), ts.str()});
        }
        exc += fmt::format("{:.12g},{:.12g},{:.12g}\n", fractions[i], traces[i].mu_f, traces[i].cov_excursion());
        out.summary += fmt::format("{:>10.4f} {:>10.4f} {:>14.4f}\n", fractions[i], traces[i].mu_f,
                                   traces[i].cov_excursion());
    }
    out.files.push_back({"excursion.csv", std::move(exc)});
    return out;
}

ScenarioOutput closed_loop(Params& p, std::uint64_t seed) {
    DiscSetup d = disc_setup(p, 240.0, 240.0);
    const double fraction = p.num("friction_fraction", 1.0, 0.0, 1e6);
    const double gx = p.num("goal_var_x", 6000.0, 0.0, 1e12);
    const double gy = p.num("goal_var_y", 600.0, 0.0, 1e12);
    const double gc = p.num("goal_cov", 300.0, -1e12, 1e12);
    const double c1 = p.num("c1", 0.1, 0.0, 1.0);
    const double epoch = p.num("epoch", 30.0, 1e-6, 1e6);
    const int epochs = p.integer("epochs", 4, 1, 100000);
    const int ics = p.integer("initial_conditions", 3, 1, 1000);
    const double band_rel = p.num("band_rel", 0.1, 0.0, 1e6);
    const double band_abs = p.num("band_abs", 50.0, 0.0, 1e12);
    const double center_tol = p.num("center_tolerance", 2.0, 1e-9, 1e9);
    const int record_every = p.integer("record_every", 24, 1, 1000000);
    p.finish();

    std::vector<ScheduledGoal> schedule;
    try {
        // The goal covariance alternates sign every epoch.
        for (int e = 0; e < epochs; ++e)
            schedule.push_back({e * epoch, CovarianceGoal(gx, gy, e % 2 ? -gc : gc, c1)});
    } catch (const GoalError& err) {
        throw ValidationError(err.what());
    }
    d.sim.mu_f = mu_for_friction_fraction(fraction);
    ControllerConfig cfg;
    cfg.force = d.force;
    cfg.center = {0.5 * d.width, 0.5 * d.height};
    cfg.center_tolerance = center_tol;
    ClosedLoopOptions opt;
    opt.end_time = epochs * epoch;
    opt.record_every = record_every;
    opt.band_rel = band_rel;
    opt.band_abs = band_abs;

    ScenarioOutput out;
    std::string ep = "initial_condition,epoch,start,end,goal_cov,reached,t_reached,cov_at_end\n";
    out.summary = fmt::format("{:>3} {:>6} {:>10} {:>8} {:>10} {:>12}\n", "ic", "epoch", "goal_cov", "reached",
                              "t_reached", "cov_at_end");
    for (int ic = 0; ic < ics; ++ic) {
        d.sim.seed = seed + static_cast<std::uint64_t>(ic);
        const DiscSwarm initial = hex_swarm(d.n, d.radius, d.width, d.height, d.sim.seed);
        const ClosedLoopResult r = run_closed_loop(initial, schedule, d.sim, cfg, opt);
        std::ostringstream st, ph;
        write_stats_csv(st, r.trace);
        write_phase_log_csv(ph, r, schedule);
        out.files.push_back({fmt::format("stats_ic{}.csv", ic), st.str()});
        out.files.push_back({fmt::format("phases_ic{}.csv", ic), ph.str()});
        for (std::size_t e = 0; e < r.epochs.size(); ++e) {
            const EpochReport& rep = r.epochs[e];
            ep += fmt::format("{},{},{:.9g},{:.9g},{:.9g},{},{:.9g},{:.9g}\n", ic, e, rep.start, rep.end,
                              rep.goal.cov(), rep.reached ? 1 : 0, rep.t_reached, rep.cov_at_end);
            out.summary += fmt::format("{:>3} {:>6} {:>10.2f} {:>8} {:>10.3f} {:>12.3f}\n", ic, e, rep.goal.cov(),
                                       rep.reached ? "yes" : "no", rep.t_reached, rep.cov_at_end);
        }
    }
    out.files.push_back({"epochs.csv", std::move(ep)});
    return out;
}

}  // namespace

std::map<std::string, std::string> parse_config(std::string_view text) {
    std::map<std::string, std::string> out;
    int line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(fmt::format("line {}: expected key = value", line_no));
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", line_no));
        if (!out.emplace(key, std::string(trim(line.substr(eq + 1)))).second)
            throw ConfigError(fmt::format("line {}: duplicate key '{}'", line_no, key));
    }
    return out;
}

ScenarioOutput run_scenario(const Scenario& sc) {
    Params p(sc.params);
    ScenarioOutput out;
    if (sc.kind == "square-sweep") out = settle_sweep(p, Workspace2D::square);
    else if (sc.kind == "circle-sweep") out = settle_sweep(p, Workspace2D::circle);
    else if (sc.kind == "two-robot") out = two_robot(p, sc.seed);
    else if (sc.kind == "n-robot") out = n_robot(p, sc.seed);
    else if (sc.kind == "open-loop-friction") out = open_loop(p, sc.seed);
    else if (sc.kind == "closed-loop-cov") out = closed_loop(p, sc.seed);
    else throw ValidationError("unknown scenario kind '" + sc.kind + "'");
    out.resolved = p.resolved;
    return out;
}

std::string checksum(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

void write_outputs(const std::filesystem::path& dir, const Scenario& sc, const ScenarioOutput& out) {
    std::filesystem::create_directories(dir);
    nlohmann::ordered_json manifest;
    manifest["kind"] = sc.kind;
    manifest["seed"] = sc.seed;
    manifest["parameters"] = out.resolved;
    nlohmann::ordered_json files = nlohmann::ordered_json::object();
    for (const OutputFile& f : out.files) {
        std::ofstream os(dir / f.name, std::ios::binary);
        os << f.content;
        if (!os) throw std::runtime_error("cannot write " + (dir / f.name).string());
        files[f.name] = "fnv1a64:" + checksum(f.content);
    }
    manifest["files"] = files;
    std::ofstream ms(dir / "manifest.json", std::ios::binary);
    ms << manifest.dump(2) << '\n';
    if (!ms) throw std::runtime_error("cannot write manifest");
}

}  // namespace swarmshape
