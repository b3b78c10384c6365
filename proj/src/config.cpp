#include "ledsel/config.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace ledsel {

namespace {

struct Ctx {
    std::string source;

    std::string where(const YAML::Node& n) const
    {
        const auto mark = n.Mark();
        if (mark.line < 0) {
            return source;
        }
        return fmt::format("{}:{}", source, mark.line + 1);
    }

    [[noreturn]] void fail(const YAML::Node& n, const std::string& what) const { throw ConfigError(what, where(n)); }

    YAML::Node require(const YAML::Node& map, const char* key) const
    {
        if (!map.IsMap()) {
            fail(map, "expected a mapping");
        }
        const YAML::Node v = map[key];
        if (!v) {
            fail(map, fmt::format("missing required field '{}'", key));
        }
        return v;
    }

    template <typename T>
    T as(const YAML::Node& n, const char* what) const
    {
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            fail(n, fmt::format("field '{}' has the wrong type", what));
        }
    }

    template <typename T>
    T get(const YAML::Node& map, const char* key, T fallback) const
    {
        if (!map.IsMap()) {
            fail(map, "expected a mapping");
        }
        const YAML::Node v = map[key];
        return v ? as<T>(v, key) : fallback;
    }

    /// Rejects keys outside `known`, so typos do not pass silently.
    void only(const YAML::Node& map, std::initializer_list<std::string_view> known) const
    {
        if (!map.IsMap()) {
            return;
        }
        for (const auto& kv : map) {
            const auto key = kv.first.as<std::string>();
            if (std::find(known.begin(), known.end(), key) == known.end()) {
                std::string list;
                for (const auto k : known) {
                    list += list.empty() ? "" : ", ";
                    list += k;
                }
                fail(kv.first, fmt::format("unknown field '{}' (expected one of: {})", key, list));
            }
        }
    }
};

YAML::Node parse_yaml(std::string_view text, const std::string& source)
{
    try {
        return YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ConfigError(e.msg, fmt::format("{}:{}", source, e.mark.line + 1));
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot open '{}'", path.string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Chromaticity point(const Ctx& ctx, const YAML::Node& n)
{
    if (!n.IsSequence() || n.size() != 2) {
        ctx.fail(n, "expected a point [x, y]");
    }
    return {ctx.as<double>(n[0], "x"), ctx.as<double>(n[1], "y")};
}

BinScreen screen_from_node(const Ctx& ctx, const YAML::Node& root)
{
    if (!root.IsMap()) {
        ctx.fail(root, "screen document must be a mapping");
    }
    ctx.only(root, {"name", "observer", "grid", "bins", "luminance_classes"});
    BinScreen s;
    s.name = ctx.get<std::string>(root, "name", "screen");
    if (const auto obs = root["observer"]) {
        try {
            s.observer = observer_from_string(ctx.as<std::string>(obs, "observer"));
        } catch (const ConfigError& e) {
            ctx.fail(obs, e.what());
        }
    }
    if (const auto grid = root["grid"]) {
        ctx.only(grid, {"origin", "cell", "count", "refine"});
        const auto origin = point(ctx, ctx.require(grid, "origin"));
        const auto cell = point(ctx, ctx.require(grid, "cell"));
        const auto count = ctx.require(grid, "count");
        if (!count.IsSequence() || count.size() != 2) {
            ctx.fail(count, "grid count must be [nx, ny]");
        }
        try {
            BinScreen g = build_grid_screen(origin, cell.x(), cell.y(), ctx.as<int>(count[0], "nx"),
                                            ctx.as<int>(count[1], "ny"));
            if (const auto refine = grid["refine"]) {
                g = refine_screen(g, ctx.as<int>(refine, "refine"));
            }
            s.bins = std::move(g.bins);
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            ctx.fail(grid, e.what());
        }
    }
    if (const auto bins = root["bins"]) {
        if (!bins.IsSequence()) {
            ctx.fail(bins, "'bins' must be a list");
        }
        for (const auto& b : bins) {
            ctx.only(b, {"id", "vertices"});
            Bin bin;
            bin.id = ctx.as<std::string>(ctx.require(b, "id"), "id");
            const auto verts = ctx.require(b, "vertices");
            if (!verts.IsSequence()) {
                ctx.fail(verts, "'vertices' must be a list of [x, y] points");
            }
            for (const auto& v : verts) {
                bin.polygon.push_back(point(ctx, v));
            }
            s.bins.push_back(std::move(bin));
        }
    }
    if (s.bins.empty()) {
        ctx.fail(root, "screen defines no bins (give 'bins' or 'grid')");
    }
    if (const auto classes = root["luminance_classes"]) {
        if (!classes.IsSequence()) {
            ctx.fail(classes, "'luminance_classes' must be a list");
        }
        for (const auto& c : classes) {
            ctx.only(c, {"label", "min", "max"});
            s.luminance_classes.push_back({ctx.as<std::string>(ctx.require(c, "label"), "label"),
                                           ctx.as<double>(ctx.require(c, "min"), "min"),
                                           ctx.as<double>(ctx.require(c, "max"), "max")});
        }
    }
    if (auto diags = validate_screen(s); !diags.empty()) {
        for (auto& d : diags) {
            d = fmt::format("{}: {}", ctx.where(root), d);
        }
        throw ValidationError(std::move(diags));
    }
    return s;
}

LedLot lot_from_node(const Ctx& ctx, const YAML::Node& root)
{
    if (!root.IsMap()) {
        ctx.fail(root, "lot document must be a mapping");
    }
    ctx.only(root, {"name", "count", "seed", "model"});
    LedLot lot;
    lot.name = ctx.get<std::string>(root, "name", "lot");
    const auto count = ctx.as<long long>(ctx.require(root, "count"), "count");
    if (count < 0) {
        ctx.fail(root["count"], "count must be non-negative");
    }
    lot.count = static_cast<std::size_t>(count);
    lot.seed = ctx.get<std::uint64_t>(root, "seed", 1);
    const auto m = ctx.require(root, "model");
    ctx.only(m, {"peak_wavelength", "fwhm", "peak_power", "variation"});
    lot.model.peak_wavelength = ctx.as<double>(ctx.require(m, "peak_wavelength"), "peak_wavelength");
    lot.model.fwhm = ctx.as<double>(ctx.require(m, "fwhm"), "fwhm");
    lot.model.peak_power = ctx.as<double>(ctx.require(m, "peak_power"), "peak_power");
    if (const auto v = m["variation"]) {
        ctx.only(v, {"peak_wavelength", "fwhm", "peak_power"});
        lot.model.variation.peak_wavelength = ctx.get<double>(v, "peak_wavelength", 0.0);
        lot.model.variation.fwhm = ctx.get<double>(v, "fwhm", 0.0);
        lot.model.variation.peak_power = ctx.get<double>(v, "peak_power", 0.0);
    }
    try {
        lot.model.validate();
    } catch (const ConfigError& e) {
        ctx.fail(m, e.what());
    }
    return lot;
}

PhaseDuration phase(const Ctx& ctx, const YAML::Node& n, const char* name)
{
    if (n.IsScalar()) {
        return PhaseDuration::fixed(ctx.as<double>(n, name));
    }
    if (n.IsMap() && n["uniform"]) {
        const auto u = n["uniform"];
        if (!u.IsSequence() || u.size() != 2) {
            ctx.fail(u, fmt::format("timing '{}': uniform needs [low, high]", name));
        }
        return PhaseDuration::uniform(ctx.as<double>(u[0], name), ctx.as<double>(u[1], name));
    }
    ctx.fail(n, fmt::format("timing '{}' must be a number or {{uniform: [low, high]}}", name));
}

std::optional<std::size_t> capacity_field(const Ctx& ctx, const YAML::Node& map)
{
    const auto c = map["capacity"];
    if (!c || (c.IsScalar() && c.as<std::string>() == "unlimited")) {
        return std::nullopt;
    }
    const auto v = ctx.as<long long>(c, "capacity");
    if (v < 0) {
        ctx.fail(c, "capacity must be non-negative");
    }
    return static_cast<std::size_t>(v);
}

template <typename F>
auto load_ref(const Ctx& ctx, const YAML::Node& n, const std::filesystem::path& base_dir, F&& from_node)
{
    if (n.IsScalar()) {
        const std::filesystem::path p = base_dir / ctx.as<std::string>(n, "reference");
        if (!std::filesystem::exists(p)) {
            ctx.fail(n, fmt::format("referenced file '{}' not found", p.string()));
        }
        const Ctx inner{p.string()};
        return from_node(inner, parse_yaml(read_file(p), inner.source));
    }
    return from_node(ctx, n);
}

}  // namespace

BinScreen parse_screen(std::string_view text, const std::string& source)
{
    const Ctx ctx{source};
    return screen_from_node(ctx, parse_yaml(text, source));
}

BinScreen load_screen(const std::filesystem::path& path) { return parse_screen(read_file(path), path.string()); }

std::string dump_screen(const BinScreen& screen)
{
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << screen.name;
    out << YAML::Key << "observer" << YAML::Value << std::string(to_string(screen.observer));
    out << YAML::Key << "bins" << YAML::Value << YAML::BeginSeq;
    for (const auto& b : screen.bins) {
        out << YAML::BeginMap << YAML::Key << "id" << YAML::Value << b.id;
        out << YAML::Key << "vertices" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (const auto& v : b.polygon) {
            out << YAML::Flow << YAML::BeginSeq << v.x() << v.y() << YAML::EndSeq;
        }
        out << YAML::EndSeq << YAML::EndMap;
    }
    out << YAML::EndSeq;
    if (!screen.luminance_classes.empty()) {
        out << YAML::Key << "luminance_classes" << YAML::Value << YAML::BeginSeq;
        for (const auto& c : screen.luminance_classes) {
            out << YAML::Flow << YAML::BeginMap << YAML::Key << "label" << YAML::Value << c.label << YAML::Key << "min"
                << YAML::Value << c.min << YAML::Key << "max" << YAML::Value << c.max << YAML::EndMap;
        }
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

nlohmann::ordered_json screen_json(const BinScreen& screen)
{
    nlohmann::ordered_json j;
    j["name"] = screen.name;
    j["observer"] = std::string(to_string(screen.observer));
    auto bins = nlohmann::ordered_json::array();
    for (const auto& b : screen.bins) {
        auto verts = nlohmann::ordered_json::array();
        for (const auto& v : b.polygon) {
            verts.push_back({v.x(), v.y()});
        }
        bins.push_back({{"id", b.id}, {"vertices", std::move(verts)}});
    }
    j["bins"] = std::move(bins);
    auto classes = nlohmann::ordered_json::array();
    for (const auto& c : screen.luminance_classes) {
        classes.push_back({{"label", c.label}, {"min", c.min}, {"max", c.max}});
    }
    j["luminance_classes"] = std::move(classes);
    return j;
}

LedLot parse_lot(std::string_view text, const std::string& source)
{
    const Ctx ctx{source};
    return lot_from_node(ctx, parse_yaml(text, source));
}

LedLot load_lot(const std::filesystem::path& path) { return parse_lot(read_file(path), path.string()); }

JobSpec parse_job(std::string_view text, const std::string& source, const std::filesystem::path& base_dir,
                  const BinScreen* fallback_screen)
{
    const Ctx ctx{source};
    const YAML::Node root = parse_yaml(text, source);
    if (!root.IsMap()) {
        ctx.fail(root, "job document must be a mapping");
    }
    ctx.only(root, {"name", "mode", "seed", "speed", "lot", "screen", "timings", "instrument", "lumens_per_y", "cmf",
                    "carousel"});
    JobSpec job;
    job.name = ctx.get<std::string>(root, "name", "job");
    job.seed = ctx.get<std::uint64_t>(root, "seed", 1);
    job.speed = ctx.get<double>(root, "speed", 0.0);
    if (!(job.speed >= 0.0)) {
        ctx.fail(root["speed"], "speed must be >= 0 (0 = maximum speed)");
    }

    const auto mode_node = ctx.require(root, "mode");
    Mode mode;
    try {
        mode = mode_from_string(ctx.as<std::string>(mode_node, "mode"));
    } catch (const ConfigError& e) {
        ctx.fail(mode_node, e.what());
    }

    job.lot = load_ref(ctx, ctx.require(root, "lot"), base_dir, lot_from_node);
    BinScreen screen = root["screen"] || fallback_screen == nullptr
                           ? load_ref(ctx, ctx.require(root, "screen"), base_dir, screen_from_node)
                           : *fallback_screen;

    ModeConfig& cfg = job.config;
    cfg = mode == Mode::Manual ? ModeConfig::manual(screen) : ModeConfig::automated(screen);

    if (const auto t = root["timings"]) {
        if (!t.IsMap()) {
            ctx.fail(t, "'timings' must be a mapping");
        }
        const std::pair<const char*, PhaseDuration*> fields[] = {
            {"pick", &cfg.timings.pick},       {"place", &cfg.timings.place},     {"settle", &cfg.timings.settle},
            {"measure", &cfg.timings.measure}, {"compute", &cfg.timings.compute}, {"deposit", &cfg.timings.deposit}};
        for (const auto& [key, dst] : fields) {
            if (const auto n = t[key]) {
                *dst = phase(ctx, n, key);
            }
        }
        for (const auto& kv : t) {
            const auto key = kv.first.as<std::string>();
            if (std::none_of(std::begin(fields), std::end(fields), [&](const auto& f) { return key == f.first; })) {
                ctx.fail(kv.first, fmt::format("unknown timing phase '{}'", key));
            }
        }
    }

    if (const auto inst = root["instrument"]) {
        if (mode == Mode::Manual) {
            ctx.only(inst, {"wavelength_accuracy", "amplitude_noise", "measurement_time"});
            SpectralInstrumentModel m;
            m.wavelength_accuracy = ctx.get<double>(inst, "wavelength_accuracy", m.wavelength_accuracy);
            m.amplitude_noise = ctx.get<double>(inst, "amplitude_noise", m.amplitude_noise);
            m.measurement_time = ctx.get<double>(inst, "measurement_time", m.measurement_time);
            cfg.instrument = m;
        } else {
            ctx.only(inst, {"chroma_noise", "lumen_noise", "measurement_time"});
            DirectInstrumentModel m;
            m.chroma_noise = ctx.get<double>(inst, "chroma_noise", m.chroma_noise);
            m.lumen_noise = ctx.get<double>(inst, "lumen_noise", m.lumen_noise);
            m.measurement_time = ctx.get<double>(inst, "measurement_time", m.measurement_time);
            cfg.instrument = m;
        }
    }

    cfg.lumens_per_y = ctx.get<double>(root, "lumens_per_y", cfg.lumens_per_y);
    if (const auto cmf = root["cmf"]) {
        const std::filesystem::path p = base_dir / ctx.as<std::string>(cmf, "cmf");
        try {
            cfg.cmf = read_cmf_table(p, cfg.screen.observer);
        } catch (const Error& e) {
            ctx.fail(cmf, e.what());
        }
    }

    YAML::Node carousel_node = root["carousel"];
    if (carousel_node) {
        if (!carousel_node.IsMap()) {
            ctx.fail(carousel_node, "'carousel' must be a mapping");
        }
        ctx.only(carousel_node, {"capacity", "compartments"});
        const auto default_cap = capacity_field(ctx, carousel_node);
        if (const auto comps = carousel_node["compartments"]) {
            if (!comps.IsSequence()) {
                ctx.fail(comps, "'compartments' must be a list");
            }
            cfg.carousel.compartments.clear();
            for (const auto& c : comps) {
                ctx.only(c, {"index", "target", "capacity"});
                Compartment comp;
                comp.index = c["index"] ? ctx.as<std::size_t>(c["index"], "index") : cfg.carousel.compartments.size();
                comp.target = ctx.as<std::string>(ctx.require(c, "target"), "target");
                comp.capacity = c["capacity"] ? capacity_field(ctx, c) : default_cap;
                cfg.carousel.compartments.push_back(std::move(comp));
            }
        } else {
            cfg.carousel = Carousel::for_screen(cfg.screen, default_cap);
        }
    }

    if (const auto problems = cfg.carousel.coverage_problems(cfg.screen); !problems.empty()) {
        std::string msg = "carousel does not match screen";
        for (const auto& p : problems) {
            msg += "; " + p;
        }
        ctx.fail(carousel_node ? carousel_node : root, msg);
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        ctx.fail(root, e.what());
    }
    return job;
}

JobSpec load_job(const std::filesystem::path& path)
{
    return parse_job(read_file(path), path.string(), path.parent_path());
}

}  // namespace ledsel
