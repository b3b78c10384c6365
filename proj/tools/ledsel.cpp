// Batch front end: chromaticities, sorting runs, plot data, screen checks
// and the breakeven calculation.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ledsel/ledsel.hpp"

namespace fs = std::filesystem;
using namespace ledsel;

namespace {

enum Exit { kOk = 0, kInputError = 1, kConfigError = 2 };

/// Input problem the user can fix by pointing at a different file.
struct InputError : Error {
    using Error::Error;
};

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(fmt::format("cannot open '{}'", path.string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes to `path`, or stdout when empty.
template <typename F>
void emit(const std::string& path, F&& write)
{
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError(fmt::format("cannot write '{}'", path));
    }
    write(out);
}

CmfTable cmf_for(const std::string& observer, const std::string& cmf_path)
{
    const Observer obs = observer_from_string(observer);
    if (!cmf_path.empty()) {
        return read_cmf_table(fs::path(cmf_path), obs);
    }
    return builtin_cmf(obs);
}

std::string csv_quote(std::string_view text)
{
    std::string out = "\"";
    for (const char ch : text) {
        out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    }
    return out + "\"";
}

struct ChromaArgs {
    std::vector<std::string> files;
    std::string observer = "CIE1931_2deg";
    std::string cmf;
    std::string screen;
    double lumens_per_y = 683.0;
    std::string out;
};

int cmd_chroma(const ChromaArgs& a)
{
    const CmfTable cmf = cmf_for(a.observer, a.cmf);
    std::optional<BinScreen> screen;
    if (!a.screen.empty()) {
        screen = load_screen(a.screen);
    }
    int failed = 0;
    emit(a.out, [&](std::ostream& out) {
        out << (screen ? "file,x,y,lumens,chroma_bin,lum_class,error\n" : "file,x,y,lumens,error\n");
        for (const auto& file : a.files) {
            try {
                const auto t = tristimulus(read_spd_csv(fs::path(file)), cmf);
                const auto xy = chromaticity(t);
                const double lm = luminous_value(t, a.lumens_per_y);
                out << fmt::format("{},{},{},{}", file, xy.x(), xy.y(), lm);
                if (screen) {
                    const auto as = classify(xy, lm, *screen);
                    out << fmt::format(",{},{}", as.chroma_bin, as.lum_class);
                }
                out << ",\n";
            } catch (const Error& e) {
                ++failed;
                fmt::print(std::cerr, "{}: {}\n", file, e.what());
                out << fmt::format("{},,,{},{}\n", file, screen ? ",," : "", csv_quote(e.what()));
            }
        }
    });
    return failed > 0 ? kInputError : kOk;
}

struct SortArgs {
    std::string job;
    std::optional<std::uint64_t> seed;
    std::string screen;
    std::string out = "report";
};

int cmd_sort(const SortArgs& a)
{
    const fs::path path(a.job);
    const std::string text = read_file(path);
    std::optional<BinScreen> fallback;
    if (!a.screen.empty()) {
        fallback = load_screen(a.screen);
    }
    JobSpec job = parse_job(text, path.string(), path.parent_path(), fallback ? &*fallback : nullptr);
    if (a.seed) {
        job.seed = *a.seed;
    }
    const SortReport report = run(generate_lot(job.lot), job.config, job.seed);
    write_report(a.out, report);
    fmt::print("{}: {} LEDs, {} mode, {:.1f} s simulated, {:.1f} LEDs/h, {} rejects, {} overflows -> {}\n", job.name,
               report.processed(), to_string(report.mode), report.simulated_seconds(), report.leds_per_hour(),
               report.rejects, report.overflows, a.out);
    return kOk;
}

struct PlotArgs {
    std::string observer = "CIE1931_2deg";
    std::string cmf;
    std::string screen;
    std::string ellipses;
    bool no_ellipses = false;
    std::string report;
    std::string out;
};

int cmd_plotdata(const PlotArgs& a)
{
    const CmfTable cmf = cmf_for(a.observer, a.cmf);
    std::optional<BinScreen> screen;
    if (!a.screen.empty()) {
        screen = load_screen(a.screen);
    }
    std::vector<MacAdamEllipse> ellipses;
    if (!a.ellipses.empty()) {
        ellipses = read_ellipses(fs::path(a.ellipses));
    } else if (!a.no_ellipses) {
        ellipses = macadam_1942();
    }
    std::vector<MeasuredPoint> points;
    if (!a.report.empty()) {
        points = read_measured_points(fs::path(a.report));
    }
    const auto bundle = make_plot_bundle(cmf, screen ? &*screen : nullptr, ellipses, points);
    emit(a.out, [&](std::ostream& out) { out << to_json(bundle).dump(1) << "\n"; });
    return kOk;
}

int cmd_screen_validate(const std::string& file)
{
    const fs::path path(file);
    const std::string text = read_file(path);
    try {
        const BinScreen s = parse_screen(text, path.string());
        fmt::print("{}: ok, {} bins, {} luminance classes\n", file, s.bins.size(), s.luminance_classes.size());
        return kOk;
    } catch (const ValidationError& e) {
        for (const auto& d : e.diagnostics()) {
            fmt::print("{}: {}\n", file, d);
        }
        return kConfigError;
    }
}

struct BreakevenArgs {
    BreakevenInputs in = BreakevenInputs::calibrated();
    std::optional<double> volume;
    double hours = 7500.0;
};

int cmd_breakeven(const BreakevenArgs& a)
{
    fmt::print("capacity at {} h/year: manual {:.0f}, automated {:.0f} LEDs\n", a.hours, a.in.manual_rate * a.hours,
               a.in.automated_rate * a.hours);
    try {
        const auto r = breakeven(a.in);
        fmt::print("breakeven volume: {:.0f} LEDs/year\n", r.threshold);
        if (a.volume) {
            fmt::print("recommendation at {:.0f} LEDs/year: {}\n", *a.volume, to_string(r.recommend(*a.volume)));
        }
    } catch (const NeverBreaksEven& e) {
        fmt::print("{}\n", e.what());
        if (a.volume) {
            fmt::print("recommendation at {:.0f} LEDs/year: {}\n", *a.volume, to_string(Recommendation::Manual));
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"LED chromaticity binning and sorting simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ledsel 0.1");

    ChromaArgs chroma;
    auto* c = app.add_subcommand("chroma", "CIE xy and lumens for SPD CSV files");
    c->add_option("files", chroma.files, "SPD CSV files (nm,power)")->required();
    c->add_option("--observer", chroma.observer, "CIE1931_2deg or CIE1964_10deg");
    c->add_option("--cmf", chroma.cmf, "colour matching function table to use instead of the built-in one");
    c->add_option("--screen", chroma.screen, "also classify against this screen");
    c->add_option("--lumens-per-y", chroma.lumens_per_y, "luminous calibration factor");
    c->add_option("--out", chroma.out, "output CSV (default stdout)");

    SortArgs sort;
    auto* s = app.add_subcommand("sort", "run a sorting job and write leds.csv and summary.json");
    s->add_option("job", sort.job, "job file")->required();
    s->add_option("--seed", sort.seed, "override the job's simulation seed");
    s->add_option("--screen", sort.screen, "screen for jobs that do not name one");
    s->add_option("--out", sort.out, "report directory")->capture_default_str();

    PlotArgs plot;
    auto* p = app.add_subcommand("plotdata", "chromaticity diagram data as JSON");
    p->add_option("--observer", plot.observer, "CIE1931_2deg or CIE1964_10deg");
    p->add_option("--cmf", plot.cmf, "colour matching function table");
    p->add_option("--screen", plot.screen, "screen whose bins to outline");
    auto* ell = p->add_option("--ellipses", plot.ellipses, "ellipse CSV (default: MacAdam 1942)");
    p->add_flag("--no-ellipses", plot.no_ellipses, "omit ellipses")->excludes(ell);
    p->add_option("--report", plot.report, "leds.csv from a sort run");
    p->add_option("--out", plot.out, "output file (default stdout)");

    std::string screen_file;
    auto* sc = app.add_subcommand("screen", "screen utilities");
    sc->require_subcommand(1);
    auto* sv = sc->add_subcommand("validate", "check a screen file");
    sv->add_option("file", screen_file, "screen file")->required();

    BreakevenArgs be;
    std::optional<double> volume;
    auto* b = app.add_subcommand("breakeven", "yearly volume above which automation pays off");
    b->add_option("--manual-rate", be.in.manual_rate, "LEDs/hour")->capture_default_str();
    b->add_option("--automated-rate", be.in.automated_rate, "LEDs/hour")->capture_default_str();
    b->add_option("--manual-cost", be.in.manual_cost, "cost per operating hour")->capture_default_str();
    b->add_option("--automated-cost", be.in.automated_cost, "cost per operating hour")->capture_default_str();
    b->add_option("--fixed-cost", be.in.automated_fixed, "automation cost per year")->capture_default_str();
    b->add_option("--hours", be.hours, "operating hours per year")->capture_default_str();
    b->add_option("--volume", volume, "yearly volume to recommend a mode for");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*c) {
            return cmd_chroma(chroma);
        }
        if (*s) {
            return cmd_sort(sort);
        }
        if (*p) {
            return cmd_plotdata(plot);
        }
        if (*sv) {
            return cmd_screen_validate(screen_file);
        }
        if (*b) {
            be.volume = volume;
            return cmd_breakeven(be);
        }
    } catch (const ValidationError& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        for (const auto& d : e.diagnostics()) {
            fmt::print(std::cerr, "  {}\n", d);
        }
        return kConfigError;
    } catch (const ConfigError& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return kInputError;
    }
    return kInputError;
}
