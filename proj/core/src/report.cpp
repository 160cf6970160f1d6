// report.cpp: CSV and SVG output, figure reproduction

#include "puredeco/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "puredeco/errors.hpp"

namespace puredeco {

namespace {

std::ofstream open_for_writing(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fmt(double x, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

// Tick spacing of 1, 2 or 5 times a power of ten giving about `n` ticks.
double nice_step(double span, int n)
{
    if (!(span > 0.0)) return 1.0;
    const double raw = span / n;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    return (r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0) * mag;
}

void write_panel(std::ostringstream& svg, const PlotPanel& p, double ox, double w, double h)
{
    const double ml = 64, mr = 16, mt = 32, mb = 48;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 0;
    bool first = true;
    for (const auto& s : p.series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (first) {
                x0 = x1 = s.x[i];
                y0 = y1 = s.y[i];
                first = false;
            }
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    if (x1 <= x0) x1 = x0 + 1.0;
    if (y1 - y0 < 1e-12) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double pw = w - ml - mr, ph = h - mt - mb;
    auto X = [&](double x) { return ox + ml + (x - x0) / (x1 - x0) * pw; };
    auto Y = [&](double y) { return mt + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<text x=\"" << fmt(ox + ml + pw / 2) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">"
        << xml_escape(p.title) << "</text>\n";
    svg << "<rect x=\"" << fmt(ox + ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw) << "\" height=\""
        << fmt(ph) << "\" fill=\"none\" stroke=\"#000\"/>\n";

    const double xs = nice_step(x1 - x0, 5);
    for (double x = std::ceil(x0 / xs) * xs; x <= x1 + 1e-9 * xs; x += xs) {
        svg << "<line x1=\"" << fmt(X(x)) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\"" << fmt(X(x)) << "\" y2=\""
            << fmt(mt + ph + 4) << "\" stroke=\"#000\"/>";
        svg << "<text x=\"" << fmt(X(x)) << "\" y=\"" << fmt(mt + ph + 16) << "\" text-anchor=\"middle\">"
            << fmt(std::abs(x) < 1e-12 * xs ? 0.0 : x, 4) << "</text>\n";
    }
    const double ys = nice_step(y1 - y0, 5);
    for (double y = std::ceil(y0 / ys) * ys; y <= y1 + 1e-9 * ys; y += ys) {
        svg << "<line x1=\"" << fmt(ox + ml - 4) << "\" y1=\"" << fmt(Y(y)) << "\" x2=\"" << fmt(ox + ml)
            << "\" y2=\"" << fmt(Y(y)) << "\" stroke=\"#000\"/>";
        svg << "<text x=\"" << fmt(ox + ml - 6) << "\" y=\"" << fmt(Y(y) + 4) << "\" text-anchor=\"end\">"
            << fmt(std::abs(y) < 1e-12 * ys ? 0.0 : y, 4) << "</text>\n";
    }
    svg << "<text x=\"" << fmt(ox + ml + pw / 2) << "\" y=\"" << fmt(h - 10) << "\" text-anchor=\"middle\">"
        << xml_escape(p.xlabel) << "</text>\n";
    svg << "<text transform=\"translate(" << fmt(ox + 14) << "," << fmt(mt + ph / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(p.ylabel) << "</text>\n";

    for (std::size_t k = 0; k < p.series.size(); ++k) {
        const auto& s = p.series[k];
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
            << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            svg << fmt(X(s.x[i])) << ',' << fmt(Y(s.y[i])) << ' ';
        }
        svg << "\"/>\n";
        const double ly = mt + 14 + 14 * static_cast<double>(k);
        svg << "<line x1=\"" << fmt(ox + ml + pw - 120) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
            << fmt(ox + ml + pw - 100) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>";
        svg << "<text x=\"" << fmt(ox + ml + pw - 96) << "\" y=\"" << fmt(ly) << "\">" << xml_escape(s.label)
            << "</text>\n";
    }
    svg << "</g>\n";
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::vector<double> column(const ThermoTrace& tr, double ThermoRecord::*field)
{
    std::vector<double> v;
    v.reserve(tr.records.size());
    for (const auto& r : tr.records) v.push_back(r.*field);
    return v;
}

void write_metadata(const std::filesystem::path& path, const ScenarioConfig& cfg, const FigureResult& res,
                    const char* name)
{
    auto out = open_for_writing(path);
    out << "figure = " << name << '\n';
    out << "omega0 = " << format_real(cfg.omega0) << '\n';
    out << "alpha = " << format_real(cfg.alpha) << '\n';
    out << "beta = " << format_real(cfg.beta) << '\n';
    out << "rho11_0 = " << format_real(cfg.rho11_0) << '\n';
    out << "rho01_re = " << format_real(cfg.rho01_re) << '\n';
    out << "rho01_im = " << format_real(cfg.rho01_im) << '\n';
    out << "t_max = " << format_real(cfg.t_max) << '\n';
    out << "dt = " << format_real(cfg.dt) << '\n';
    out << "cutoff_sweep = ";
    for (std::size_t i = 0; i < res.traces.size(); ++i) out << (i ? "," : "") << format_real(res.traces[i].first);
    out << "  # sweep values are a choice of this tool, not taken from a reference\n";
    for (const auto& [cutoff, tr] : res.traces) {
        const ThermoRecord& last = tr.records.back();
        out << "# cutoff " << format_real(cutoff) << ": Sigma_loc(t_max) = " << format_real(last.Sigma_loc)
            << ", Sigma_gl(t_max) = " << format_real(last.Sigma_gl) << '\n';
        for (const auto& note : tr.notes) out << "#   " << note << '\n';
    }
}

} // namespace

std::string format_real(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trace_csv(std::ostream& out, const ThermoTrace& trace, std::optional<double> cutoff, bool header)
{
    if (header) out << (cutoff ? "cutoff," : "") << kTraceHeader << '\n';
    for (const auto& r : trace.records) {
        if (cutoff) out << format_real(*cutoff) << ',';
        const double row[] = {r.t,    r.S,     r.sigma_loc, r.Sigma_loc, r.U_loc, r.W_loc, r.Q_loc,
                              r.Q_gl, r.Sigma_gl, r.U_elb, r.W_elb,     r.U_lp,  r.W_lp};
        for (std::size_t i = 0; i < std::size(row); ++i) out << (i ? "," : "") << format_real(row[i]);
        out << '\n';
    }
}

void write_trace_csv(const std::filesystem::path& path, const ThermoTrace& trace)
{
    auto out = open_for_writing(path);
    write_trace_csv(out, trace);
}

void write_oracle_csv(std::ostream& out, const OracleReport& report)
{
    out << "t,coherence_analytic,coherence_exact,H_I_analytic,H_I_exact,Q_gl_exact,"
           "Sigma_gl_analytic,Sigma_gl_exact,Sigma_gl_relent,energy_residual\n";
    for (const auto& r : report.rows) {
        const double row[] = {r.t,
                              r.coherence_analytic,
                              r.coherence_exact,
                              r.interaction_analytic,
                              r.interaction_exact,
                              r.Q_gl_exact,
                              r.Sigma_gl_analytic,
                              r.Sigma_gl_exact,
                              r.Sigma_gl_relent,
                              r.energy_residual};
        for (std::size_t i = 0; i < std::size(row); ++i) out << (i ? "," : "") << format_real(row[i]);
        out << '\n';
    }
}

void write_oracle_csv(const std::filesystem::path& path, const OracleReport& report)
{
    auto out = open_for_writing(path);
    write_oracle_csv(out, report);
}

void write_oracle_summary(std::ostream& out, const OracleReport& report)
{
    for (const auto& c : report.checks) {
        char line[160];
        std::snprintf(line, sizeof line, "%-22s max deviation %.3e  tolerance %.1e  %s\n", c.name.c_str(),
                      c.deviation, c.tolerance, c.passed ? "PASS" : "FAIL");
        out << line;
    }
}

std::string render_svg(const std::vector<PlotPanel>& panels)
{
    const double w = 420, h = 320;
    const double total = w * static_cast<double>(std::max<std::size_t>(1, panels.size()));
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(total) << "\" height=\"" << fmt(h)
        << "\" viewBox=\"0 0 " << fmt(total) << ' ' << fmt(h) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) write_panel(svg, panels[i], w * static_cast<double>(i), w, h);
    svg << "</svg>\n";
    return svg.str();
}

FigureResult reproduce_figure(Figure which, const std::filesystem::path& out_dir, const ScenarioConfig& cfg)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

    FigureResult res;
    const char* name = which == Figure::EntropyProduction ? "fig1" : "fig2";
    std::vector<double> cutoffs =
        which == Figure::EntropyProduction ? cfg.cutoff_sweep : std::vector<double>{cfg.cutoff};

    // Independent runs per cutoff; results are collected in sweep order.
    std::vector<std::future<ThermoTrace>> jobs;
    for (double c : cutoffs) {
        ScenarioConfig run = cfg;
        run.cutoff = c;
        run.conventions = Conventions{};
        jobs.push_back(std::async(std::launch::async, [run] { return run_scenario(run); }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) res.traces.emplace_back(cutoffs[i], jobs[i].get());

    const auto csv_path = out_dir / (std::string(name) + ".csv");
    {
        auto out = open_for_writing(csv_path);
        for (std::size_t i = 0; i < res.traces.size(); ++i) {
            write_trace_csv(out, res.traces[i].second, res.traces[i].first, i == 0);
        }
    }

    std::vector<PlotPanel> panels;
    if (which == Figure::EntropyProduction) {
        PlotPanel loc{"Local entropy production", "t", "Sigma_loc", {}};
        PlotPanel gl{"Global entropy production", "t", "Sigma_gl", {}};
        for (std::size_t i = 0; i < res.traces.size(); ++i) {
            const auto& [c, tr] = res.traces[i];
            const std::string color = kPalette[i % std::size(kPalette)];
            const auto t = column(tr, &ThermoRecord::t);
            loc.series.push_back({"cutoff " + fmt(c, 4), t, column(tr, &ThermoRecord::Sigma_loc), color, false});
            gl.series.push_back({"cutoff " + fmt(c, 4), t, column(tr, &ThermoRecord::Sigma_gl), color, false});
        }
        panels = {loc, gl};
    } else {
        const ThermoTrace& tr = res.traces.front().second;
        const auto t = column(tr, &ThermoRecord::t);
        std::vector<double> zeros(t.size(), 0.0);
        std::vector<double> q_gl = column(tr, &ThermoRecord::Q_gl);
        panels.push_back({"(a) local", "t", "energy",
                          {{"U", t, column(tr, &ThermoRecord::U_loc), kPalette[0], false},
                           {"W", t, column(tr, &ThermoRecord::W_loc), kPalette[1], true},
                           {"Q", t, column(tr, &ThermoRecord::Q_loc), kPalette[2], false}}});
        auto shifted = [](std::vector<double> v) {
            const double v0 = v.empty() ? 0.0 : v.front();
            for (auto& x : v) x -= v0;
            return v;
        };
        panels.push_back({"(b) ELB", "t", "energy",
                          {{"dU", t, shifted(column(tr, &ThermoRecord::U_elb)), kPalette[0], false},
                           {"W", t, column(tr, &ThermoRecord::W_elb), kPalette[1], true},
                           {"Q", t, q_gl, kPalette[2], true}}});
        panels.push_back({"(c) LP", "t", "energy",
                          {{"dU", t, shifted(column(tr, &ThermoRecord::U_lp)), kPalette[0], false},
                           {"W", t, column(tr, &ThermoRecord::W_lp), kPalette[1], false},
                           {"Q", t, q_gl, kPalette[2], false}}});
    }
    const auto svg_path = out_dir / (std::string(name) + ".svg");
    {
        auto out = open_for_writing(svg_path);
        out << render_svg(panels);
    }
    const auto meta_path = out_dir / (std::string(name) + "_meta.txt");
    write_metadata(meta_path, cfg, res, name);
    res.files = {csv_path, svg_path, meta_path};
    return res;
}

} // namespace puredeco
