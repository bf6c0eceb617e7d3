// dtflop: expand series, verify scenarios, list walls and dump oracle tables.
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.

#include <CLI11.hpp>

#include <dtflop/charges.hpp>
#include <dtflop/config.hpp>
#include <dtflop/io.hpp>
#include <dtflop/lattice.hpp>
#include <dtflop/oracles.hpp>
#include <dtflop/series.hpp>
#include <dtflop/wallcross.hpp>

#include <fstream>
#include <iostream>
#include <memory>

using namespace dtflop;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string model = "conifold";
    std::vector<std::int64_t> box{8, 4};
    std::optional<std::int64_t> order;
    std::string format = "json";
    std::string out;
    std::uint64_t seed = 20240611;
    std::string config;

    // expand
    std::string builder;
    std::optional<std::int64_t> chi;
    std::string sign = "-";
    std::int64_t yexp = 1;
    std::int64_t exponent = 1;

    // verify
    std::vector<std::string> scenarios;

    // walls
    std::string path = "omega_ray";
    std::string b = "-1/2";
    std::string z = "-1,1";

    // oracle
    std::string kind;
    int limit = 8;
    std::optional<int> ceiling;
    bool fit = false;
};

// Keys of a --config file replace the corresponding flags.
void apply_config(Options &o)
{
    if (o.config.empty()) {
        return;
    }
    const auto cfg = Config::load(o.config);
    if (auto v = cfg.find("model")) {
        o.model = *v;
    }
    if (cfg.has("box")) {
        const auto b = parse_int_list(cfg.get("box"));
        if (b.size() != 2) {
            throw UsageError("config key box needs two integers");
        }
        o.box = b;
    }
    if (cfg.has("order")) {
        o.order = cfg.get_int("order");
    }
    if (auto v = cfg.find("format")) {
        o.format = *v;
    }
    if (auto v = cfg.find("out")) {
        o.out = *v;
    }
    if (cfg.has("seed")) {
        o.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
    }
    if (cfg.has("chi")) {
        o.chi = cfg.get_int("chi");
    }
    if (auto v = cfg.find("sign")) {
        o.sign = *v;
    }
    if (cfg.has("yexp")) {
        o.yexp = cfg.get_int("yexp");
    }
    if (cfg.has("exponent")) {
        o.exponent = cfg.get_int("exponent");
    }
    if (cfg.has("scenario")) {
        o.scenarios = cfg.get_all("scenario");
    }
    if (auto v = cfg.find("path")) {
        o.path = *v;
    }
    if (auto v = cfg.find("b")) {
        o.b = *v;
    }
    if (auto v = cfg.find("z")) {
        o.z = *v;
    }
    if (cfg.has("limit")) {
        o.limit = static_cast<int>(cfg.get_int("limit"));
    }
    if (cfg.has("ceiling")) {
        o.ceiling = static_cast<int>(cfg.get_int("ceiling"));
    }
}

Truncation box_of(const Options &o)
{
    if (o.box.size() != 2 || o.box[0] < 0 || o.box[1] < 0) {
        throw UsageError("--box takes two non-negative integers");
    }
    return {o.box[0], o.box[1]};
}

ModelPtr load_model(const Options &o)
{
    return std::make_shared<const FlopModel>(FlopModel::named_or_file(o.model));
}

void emit(const Options &o, const std::string &text)
{
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
        throw UsageError("cannot write " + o.out);
    }
    f << text;
}

void require_format(const Options &o)
{
    if (o.format != "json" && o.format != "csv") {
        throw UsageError("--format must be json or csv");
    }
}

int cmd_expand(const Options &o)
{
    require_format(o);
    const auto model = load_model(o);
    const auto box = box_of(o);
    const Truncation t{o.order.value_or(box.n_max), box.m_max};
    if (t.n_max < 0) {
        throw UsageError("--order must be non-negative");
    }
    const auto tx = SupportSet::t_x(model);
    const auto nc = SupportSet::p_t(model, 0);
    const auto chi = o.chi.value_or(model->euler_char());
    std::optional<ConeSeries> s;
    if (o.builder == "macmahon") {
        s = macmahon(chi, tx, t);
    } else if (o.builder == "euler_product") {
        if (o.sign != "+" && o.sign != "-") {
            throw UsageError("--sign must be + or -");
        }
        if (model->exceptional_rank() != 1) {
            throw UsageError("euler_product needs a single exceptional class");
        }
        const auto y = o.yexp * model->basis_class(0);
        s = euler_product(t.n_max, o.sign == "+" ? 1 : -1, y, o.exponent, o.yexp >= 0 ? tx : nc, t);
    } else if (o.builder == "pt_closed_form") {
        s = pt_closed_form(model, t);
    } else if (o.builder == "dt_closed_form") {
        s = dt_closed_form(model, t);
    } else if (o.builder == "ncdt_closed_form") {
        s = ncdt_closed_form(model, t);
    } else {
        throw UsageError("unknown builder '" + o.builder
                         + "' (macmahon, euler_product, pt_closed_form, dt_closed_form, ncdt_closed_form)");
    }
    emit(o, o.format == "json" ? write_series_json(*s) : write_series_csv(*s));
    return exit_ok;
}

int cmd_verify(const Options &o)
{
    require_format(o);
    const auto model = load_model(o);
    const auto box = box_of(o);
    ScenarioOptions so;
    so.b = parse_rational(o.b);
    auto names = o.scenarios;
    if (names.empty()) {
        names = scenario_names();
        names.push_back("oracles");
    }
    std::vector<ScenarioReport> reports;
    for (const auto &name : names) {
        reports.push_back(name == "oracles" ? run_oracle_checks(o.seed) : run_scenario(name, model, box, so));
    }
    bool all = true;
    for (const auto &r : reports) {
        all = all && r.pass;
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.scenario << " (" << r.box.n_max << ", " << r.box.m_max << ")";
        if (const auto *f = r.first_failure()) {
            std::cerr << ": " << f->label << (f->detail.empty() ? "" : ", " + f->detail);
        }
        std::cerr << '\n';
    }
    if (o.format == "json") {
        Json doc;
        doc["status"] = all ? "pass" : "fail";
        doc["seed"] = o.seed;
        Json rs = Json::array();
        for (const auto &r : reports) {
            rs.push_back(report_to_json(r));
        }
        doc["reports"] = std::move(rs);
        emit(o, doc.dump(2) + "\n");
    } else {
        std::string csv = "scenario,check,status,first_mismatch\n";
        for (const auto &r : reports) {
            for (const auto &c : r.checks) {
                csv += r.scenario + ",\"" + c.label + "\"," + (c.pass ? "pass" : "fail") + ","
                       + (c.first_mismatch ? "\"" + to_string(*c.first_mismatch) + "\"" : "") + "\n";
            }
        }
        emit(o, csv);
    }
    return all ? exit_ok : exit_failed;
}

int cmd_walls(const Options &o)
{
    require_format(o);
    const auto model = load_model(o);
    const auto box = box_of(o);
    Config cfg;
    cfg.set("path", o.path);
    cfg.set("b", o.b);
    cfg.set("z", o.z);
    if (!o.config.empty()) {
        const auto file = Config::load(o.config);
        for (const auto *key : {"omega_prime", "z0", "z0_start"}) {
            if (auto v = file.find(key)) {
                cfg.set(key, *v);
            }
        }
    }
    const auto path = ChargePath::from_config(cfg, *model);
    if (!b_in_pV(path.base.b, 0, *model)) {
        std::cerr << "B = " << o.b << " H is outside 0V(X/Y)\n";
        return exit_failed;
    }
    std::vector<WallEvent> events;
    try {
        events = detect_walls(path, *model, ClassBox::symmetric(box, model->rank()));
    } catch (const NonGoodPathError &e) {
        std::cerr << e.what() << '\n';
        return exit_failed;
    }
    emit(o, o.format == "json" ? walls_to_json(events).dump(2) + "\n" : write_walls_csv(events));
    return exit_ok;
}

int cmd_oracle(const Options &o)
{
    require_format(o);
    OracleLimits limits;
    if (o.kind == "plane") {
        if (o.ceiling) {
            limits.plane = *o.ceiling;
        }
        const auto counts = plane_partition_counts(o.limit, limits);
        emit(o, o.format == "json" ? plane_counts_json(counts).dump(2) + "\n" : plane_counts_csv(counts));
        return exit_ok;
    }
    if (o.kind != "pyramid") {
        throw UsageError("oracle kind must be plane or pyramid");
    }
    if (o.ceiling) {
        limits.pyramid = *o.ceiling;
    }
    const auto table = count_pyramid_partitions(o.limit, limits);
    std::optional<VariableMap> map;
    int status = exit_ok;
    std::string fit_error;
    if (o.fit) {
        const auto model = std::make_shared<const FlopModel>(FlopModel::conifold());
        const Truncation t{o.limit + 2, o.limit + 2};
        try {
            map = fit_variable_map(table, ncdt_closed_form(model, t), o.limit);
        } catch (const DomainError &e) {
            fit_error = e.what();
            status = exit_failed;
        }
    }
    if (o.format == "json") {
        Json doc;
        doc["counts"] = pyramid_counts_json(table);
        if (o.fit) {
            if (map) {
                doc["fit"] = Json{{"alpha", map->alpha}, {"sign_rule", map->sign_rule}, {"map", map->describe()}};
            } else {
                doc["fit"] = Json{{"error", fit_error}};
            }
        }
        emit(o, doc.dump(2) + "\n");
    } else {
        std::string text = pyramid_counts_csv(table);
        if (o.fit) {
            text += "# fit: " + (map ? map->describe() : fit_error) + "\n";
        }
        emit(o, text);
    }
    return status;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Wall-crossing engine for DT-type series of flopping contractions"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--model", o.model, "conifold, conifold+ or a model file");
        sub->add_option("--box", o.box, "truncation N M")->expected(2);
        sub->add_option("--format", o.format, "json or csv");
        sub->add_option("--out", o.out, "output path (default stdout)");
        sub->add_option("--seed", o.seed, "seed for randomized checks");
        sub->add_option("--config", o.config, "key = value file overriding the flags");
    };

    auto *expand = app.add_subcommand("expand", "expand a closed-form series");
    common(expand);
    expand->add_option("builder", o.builder, "macmahon, euler_product, pt_closed_form, dt_closed_form, ncdt_closed_form")
        ->required();
    expand->add_option("--order", o.order, "n cutoff (default: N of --box)");
    expand->add_option("--chi", o.chi, "Euler characteristic for macmahon");
    expand->add_option("--sign", o.sign, "+ or - for euler_product");
    expand->add_option("--yexp", o.yexp, "power of y in euler_product");
    expand->add_option("--exponent", o.exponent, "outer exponent of euler_product");

    auto *verify = app.add_subcommand("verify", "run scenarios and oracle checks");
    common(verify);
    verify->add_option("--scenario", o.scenarios, "scenario name or 'oracles' (repeatable, default all)");
    verify->add_option("--b", o.b, "B in units of H");

    auto *walls = app.add_subcommand("walls", "list wall events along a path");
    common(walls);
    walls->add_option("--path", o.path, "omega_ray, linear_xi or flop_ray");
    walls->add_option("--b", o.b, "B in units of H");
    walls->add_option("--z", o.z, "Z(O_X) as 're,im'");

    auto *oracle = app.add_subcommand("oracle", "dump enumeration tables");
    common(oracle);
    oracle->add_option("kind", o.kind, "plane or pyramid")->required();
    oracle->add_option("--limit", o.limit, "largest size enumerated");
    oracle->add_option("--ceiling", o.ceiling, "raise the enumeration ceiling");
    oracle->add_flag("--fit", o.fit, "fit the pyramid dictionary against the ncDT series");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        apply_config(o);
        if (expand->parsed()) {
            return cmd_expand(o);
        }
        if (verify->parsed()) {
            return cmd_verify(o);
        }
        if (walls->parsed()) {
            return cmd_walls(o);
        }
        return cmd_oracle(o);
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
    } catch (const ConfigurationError &e) {
        std::cerr << "configuration error: " << e.what() << '\n';
    } catch (const LimitError &e) {
        std::cerr << "limit exceeded: " << e.what() << '\n';
    } catch (const std::invalid_argument &e) {
        std::cerr << "invalid input: " << e.what() << '\n';
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return exit_usage;
}
