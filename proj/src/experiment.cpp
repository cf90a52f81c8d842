#include "scenario/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "scenario/error.hpp"
#include "scenario/sampling.hpp"

namespace scenario {

namespace {

constexpr const char* kCsvHeader = "d,N,mean_error,std_error,replicates,seed";

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

template <class T>
T parse_field(const std::string& text, std::size_t line) {
    std::istringstream in(text);
    T v{};
    in >> v;
    if (in.fail() || !in.eof())
        throw InputError("csv line " + std::to_string(line) + ": bad field '" + text + "'");
    return v;
}

double parse_real(const std::string& text, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size())
        throw InputError("csv line " + std::to_string(line) + ": bad field '" + text + "'");
    return v;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << body;
    out.flush();
    if (!out) throw IoError("write to " + path.string() + " failed");
}

std::vector<ErrorRow> sorted_rows(const ErrorSurface& surface) {
    std::vector<ErrorRow> rows = surface.rows;
    std::stable_sort(rows.begin(), rows.end(), [](const ErrorRow& a, const ErrorRow& b) {
        return a.d != b.d ? a.d < b.d : a.n < b.n;
    });
    return rows;
}

}  // namespace

void ExperimentSpec::validate() const {
    if (dims.empty()) throw InputError("experiment needs at least one dimension");
    for (std::size_t d : dims)
        if (d < 1) throw InputError("experiment dimensions must be >= 1");
    if (sizes.empty()) throw InputError("experiment needs at least one sample size");
    if (sizes.front() < 1) throw InputError("experiment sample sizes must be >= 1");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw InputError("experiment sample sizes must be strictly increasing");
    if (replicates < 1) throw InputError("experiment needs at least one replicate");
    minimizer.validate();
}

std::uint64_t dimension_seed(std::uint64_t master_seed, std::size_t d) noexcept {
    return spawn_substream(master_seed, d);
}

ErrorSurface run_error_surface(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<std::size_t> dims = spec.dims;
    std::sort(dims.begin(), dims.end());
    dims.erase(std::unique(dims.begin(), dims.end()), dims.end());

    const std::size_t n_sizes = spec.sizes.size();
    const auto n_rep = static_cast<std::int64_t>(spec.replicates);
    ErrorSurface surface;
    for (std::size_t d : dims) {
        const MinmaxProblem problem = make_builtin(spec.problem, d, spec.box_bound);
        if (!problem.optimum) throw Unavailable(problem.name + ": optimal value J* is unknown");
        const std::uint64_t dseed = dimension_seed(spec.master_seed, d);

        // errors[r * n_sizes + k]: replicate r at sizes[k]; slots are fixed by index.
        std::vector<double> errors(spec.replicates * n_sizes);
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t r = 0; r < n_rep; ++r) {
            try {
                const auto sols = nested_run(problem, spawn_substream(dseed, static_cast<std::uint64_t>(r)),
                                             spec.sizes, spec.minimizer);
                for (std::size_t k = 0; k < n_sizes; ++k)
                    errors[static_cast<std::size_t>(r) * n_sizes + k] = error_vs_true(sols[k], problem);
            } catch (...) {
#pragma omp critical(experiment_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);

        const double reps = static_cast<double>(spec.replicates);
        for (std::size_t k = 0; k < n_sizes; ++k) {
            double sum = 0.0;
            for (std::size_t r = 0; r < spec.replicates; ++r) sum += errors[r * n_sizes + k];
            const double mean = sum / reps;
            double ss = 0.0;
            for (std::size_t r = 0; r < spec.replicates; ++r) {
                const double e = errors[r * n_sizes + k] - mean;
                ss += e * e;
            }
            const double sd = spec.replicates > 1 ? std::sqrt(ss / (reps - 1.0)) : 0.0;
            surface.rows.push_back({d, spec.sizes[k], mean, sd / std::sqrt(reps), spec.replicates, dseed});
        }
    }
    return surface;
}

void write_csv(const ErrorSurface& surface, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const ErrorRow& r : sorted_rows(surface)) {
        out << r.d << ',' << r.n << ',' << fmt("%.17g", r.mean_error) << ','
            << fmt("%.17g", r.std_error) << ',' << r.replicates << ',' << r.seed << '\n';
    }
}

std::string to_csv(const ErrorSurface& surface) {
    std::ostringstream out;
    write_csv(surface, out);
    return out.str();
}

ErrorSurface parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw InputError("csv: missing or unexpected header");
    ErrorSurface surface;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
        if (fields.size() != 6)
            throw InputError("csv line " + std::to_string(lineno) + ": expected 6 fields");
        ErrorRow r;
        r.d = parse_field<std::size_t>(fields[0], lineno);
        r.n = parse_field<std::size_t>(fields[1], lineno);
        r.mean_error = parse_real(fields[2], lineno);
        r.std_error = parse_real(fields[3], lineno);
        r.replicates = parse_field<std::size_t>(fields[4], lineno);
        r.seed = parse_field<std::uint64_t>(fields[5], lineno);
        surface.rows.push_back(r);
    }
    return surface;
}

std::string render_svg(const ErrorSurface& surface) {
    constexpr double W = 640, H = 440, left = 70, right = 130, top = 30, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;

    const std::vector<ErrorRow> rows = sorted_rows(surface);
    std::vector<const ErrorRow*> pts;
    for (const ErrorRow& r : rows)
        if (r.n > 0 && r.mean_error > 0.0 && std::isfinite(r.mean_error)) pts.push_back(&r);

    // Axis ranges in log10, widened to whole decades.
    double xlo = 0, xhi = 1, ylo = -1, yhi = 0;
    if (!pts.empty()) {
        xlo = ylo = std::numeric_limits<double>::infinity();
        xhi = yhi = -std::numeric_limits<double>::infinity();
        for (const ErrorRow* r : pts) {
            const double lx = std::log10(static_cast<double>(r->n)), ly = std::log10(r->mean_error);
            xlo = std::min(xlo, lx), xhi = std::max(xhi, lx);
            ylo = std::min(ylo, ly), yhi = std::max(yhi, ly);
        }
        xlo = std::floor(xlo), xhi = std::ceil(xhi), ylo = std::floor(ylo), yhi = std::ceil(yhi);
        if (xhi <= xlo) xhi = xlo + 1;
        if (yhi <= ylo) yhi = ylo + 1;
    }
    auto px = [&](double lx) { return left + (lx - xlo) / (xhi - xlo) * pw; };
    auto py = [&](double ly) { return top + (yhi - ly) / (yhi - ylo) * ph; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<g id=\"axes\" stroke=\"black\" fill=\"none\">\n";
    s << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
      << top + ph << "\"/>\n";
    s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
      << "\"/>\n</g>\n";
    s << "<g id=\"ticks\" text-anchor=\"middle\">\n";
    for (double e = xlo; e <= xhi + 1e-9; e += 1) {
        s << "<line x1=\"" << fmt("%.2f", px(e)) << "\" y1=\"" << top + ph << "\" x2=\""
          << fmt("%.2f", px(e)) << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>";
        s << "<text x=\"" << fmt("%.2f", px(e)) << "\" y=\"" << top + ph + 20 << "\">1e"
          << static_cast<int>(e) << "</text>\n";
    }
    for (double e = ylo; e <= yhi + 1e-9; e += 1) {
        s << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt("%.2f", py(e)) << "\" x2=\"" << left
          << "\" y2=\"" << fmt("%.2f", py(e)) << "\" stroke=\"black\"/>";
        s << "<text x=\"" << left - 25 << "\" y=\"" << fmt("%.2f", py(e) + 4) << "\">1e"
          << static_cast<int>(e) << "</text>\n";
    }
    s << "</g>\n";
    s << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15
      << "\" text-anchor=\"middle\">number of scenarios N</text>\n";
    s << "<text transform=\"translate(18," << top + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">mean error J* - J_N</text>\n";

    std::size_t series = 0;
    for (std::size_t i = 0; i < pts.size();) {
        std::size_t j = i;
        while (j < pts.size() && pts[j]->d == pts[i]->d) ++j;
        const char* color = palette[series % std::size(palette)];
        s << "<g id=\"d" << pts[i]->d << "\" stroke=\"" << color << "\" fill=\"" << color << "\">\n";
        if (j - i > 1) {
            s << "<polyline fill=\"none\" stroke-width=\"2\" points=\"";
            for (std::size_t k = i; k < j; ++k)
                s << (k > i ? " " : "") << fmt("%.2f", px(std::log10(static_cast<double>(pts[k]->n))))
                  << ',' << fmt("%.2f", py(std::log10(pts[k]->mean_error)));
            s << "\"/>\n";
        }
        for (std::size_t k = i; k < j; ++k)
            s << "<circle r=\"3\" cx=\"" << fmt("%.2f", px(std::log10(static_cast<double>(pts[k]->n))))
              << "\" cy=\"" << fmt("%.2f", py(std::log10(pts[k]->mean_error))) << "\"/>\n";
        const double ly = top + 15 + 18 * static_cast<double>(series);
        s << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 40
          << "\" y2=\"" << ly - 4 << "\" stroke-width=\"2\"/>";
        s << "<text x=\"" << left + pw + 45 << "\" y=\"" << ly << "\" stroke=\"none\" fill=\"black\">d = "
          << pts[i]->d << "</text>\n</g>\n";
        ++series;
        i = j;
    }
    s << "</svg>\n";
    return s.str();
}

void emit_csv(const ErrorSurface& surface, const std::filesystem::path& path) {
    write_file(path, to_csv(surface));
}

void emit_plot(const ErrorSurface& surface, const std::filesystem::path& path) {
    write_file(path, render_svg(surface));
}

}  // namespace scenario
