#include "tibo/report.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tibo {

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

std::string short_num(double v) {
    if (std::isnan(v)) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

std::ofstream open_or_throw(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

void write_report_csv(std::ostream& out, std::span<const RunReport> reports) {
    out << kReportCsvHeader << '\n';
    for (const auto& r : reports) {
        out << r.id << ',' << to_string(r.bc) << ',' << num(r.theta) << ',' << to_string(r.status) << ','
            << num(r.max_resid) << ',' << num(r.max_dev_base) << ','
            << (r.max_dev_alt ? num(*r.max_dev_alt) : std::string()) << ',' << num(r.rk4_dev) << ','
            << r.iterations << ',' << num(r.wall_ms) << '\n';
    }
}

void write_report_csv(const std::filesystem::path& path, std::span<const RunReport> reports) {
    auto out = open_or_throw(path);
    write_report_csv(out, reports);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string format_summary(std::span<const RunReport> reports) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%4s  %-8s  %-10s  %-10s  %-10s  %-10s  %7s\n", "id", "status", "max_resid",
                  "dev_base", "dev_alt", "rk4_dev", "iters");
    os << line;
    std::array<int, 3> counts{};
    std::array<double, 3> worst_resid{};
    std::array<double, 3> worst_dev{};
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%4d  %-8s  %-10s  %-10s  %-10s  %-10s  %7d%s\n", r.id,
                      std::string(to_string(r.status)).c_str(), short_num(r.max_resid).c_str(),
                      short_num(r.max_dev_base).c_str(), r.max_dev_alt ? short_num(*r.max_dev_alt).c_str() : "-",
                      short_num(r.rk4_dev).c_str(), r.iterations, r.crashed ? "  CRASHED" : "");
        os << line;
        const auto k = static_cast<std::size_t>(r.status);
        ++counts[k];
        worst_resid[k] = std::max(worst_resid[k], r.max_resid);
        worst_dev[k] = std::max(worst_dev[k], r.max_dev_base);
    }
    os << '\n';
    std::snprintf(line, sizeof line, "%-8s  %5s  %-14s  %-14s\n", "status", "count", "max max_resid",
                  "max dev_base");
    os << line;
    for (std::size_t k = 0; k < 3; ++k) {
        const auto label = std::string(to_string(static_cast<RunStatus>(k)));
        if (counts[k] == 0) {
            std::snprintf(line, sizeof line, "%-8s  %5d  %-14s  %-14s\n", label.c_str(), 0, "-", "-");
        } else {
            std::snprintf(line, sizeof line, "%-8s  %5d  %-14s  %-14s\n", label.c_str(), counts[k],
                          short_num(worst_resid[k]).c_str(), short_num(worst_dev[k]).c_str());
        }
        os << line;
    }
    return os.str();
}

void write_curves(const std::filesystem::path& dir, std::span<const RunReport> reports) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());
    for (const auto& r : reports) {
        const auto path = dir / ("scenario_" + std::to_string(r.id) + ".csv");
        auto out = open_or_throw(path);
        out << "x,y_opt,y_b\n";
        for (std::size_t i = 0; i < r.curve.x.size(); ++i) {
            out << num(r.curve.x[i]) << ',' << num(r.curve.y_opt[i]) << ',' << num(r.curve.y_base[i]) << '\n';
        }
        out.flush();
        if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
    }
}

}  // namespace tibo
