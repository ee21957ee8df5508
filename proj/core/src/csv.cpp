#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "lte/harness.hpp"

namespace lte {

void write_csv(std::ostream& os, const BoundaryReport& report) {
  os << "model,scheme,lambda,dx,dt,T,samples,in_domain\n";
  for (const auto& r : report.rows) {
    fmt::print(os, "{},{},{},{},{},{},{},{}\n", r.model, r.scheme, r.lambda, r.dx, r.dt, r.T,
               r.samples, r.in_domain);
  }
}

void write_csv(std::ostream& os, const std::vector<WeakErrorReport>& reports) {
  os << "level,dx,dt,test_function,weak_error,std_error,wall_seconds\n";
  for (const auto& rep : reports) {
    for (const auto& r : rep.rows) {
      fmt::print(os, "{},{},{},{},{},{},{}\n", r.level, r.dx, r.dt, r.test_function, r.weak_error,
                 r.std_error, r.wall_seconds);
    }
  }
  for (const auto& rep : reports) {
    if (!rep.has_fit) continue;
    fmt::print(os, "# slope={} residual={}", rep.fit.slope, rep.fit.residual);
    if (reports.size() > 1) fmt::print(os, " test_function={}", rep.test_function);
    os << '\n';
  }
}

void write_csv(std::ostream& os, const Trajectory& tr, const ModelSpec& model) {
  os << "t,x,value\n";
  const Grid& g = tr.grid;
  for (std::size_t m = 0; m < tr.states.size(); ++m) {
    const double t = g.t(static_cast<int>(m));
    for (int n = 0; n <= g.N(); ++n) {
      const double z = (n == 0 || n == g.N()) ? 0.0 : tr.states[m].at(n - 1);
      fmt::print(os, "{},{},{}\n", t, g.x(n), model.from_working(z));
    }
  }
}

void write_csv(std::ostream& os, const ExactSimCheck& c) {
  os << "model,x0,dt,lambda,samples,quantity,exact,oracle,std_error\n";
  fmt::print(os, "{},{},{},{},{},mean,{},{},{}\n", c.model, c.x0, c.dt, c.lambda, c.samples,
             c.mean.exact, c.mean.oracle, c.mean.std_error);
  fmt::print(os, "{},{},{},{},{},variance,{},{},{}\n", c.model, c.x0, c.dt, c.lambda, c.samples,
             c.variance.exact, c.variance.oracle, c.variance.std_error);
  fmt::print(os, "{},{},{},{},{},ks_distance,{},,\n", c.model, c.x0, c.dt, c.lambda, c.samples,
             c.ks_distance);
}

namespace {

template <class Writer>
void write_to(const std::string& path, Writer&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed writing CSV to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing CSV to '" + path + "'");
}

}  // namespace

template <class Report>
void emit_csv(const Report& report, const std::string& path) {
  write_to(path, [&](std::ostream& os) { write_csv(os, report); });
}

template void emit_csv<BoundaryReport>(const BoundaryReport&, const std::string&);
template void emit_csv<std::vector<WeakErrorReport>>(const std::vector<WeakErrorReport>&,
                                                     const std::string&);
template void emit_csv<ExactSimCheck>(const ExactSimCheck&, const std::string&);

void emit_csv(const Trajectory& tr, const ModelSpec& model, const std::string& path) {
  write_to(path, [&](std::ostream& os) { write_csv(os, tr, model); });
}

}  // namespace lte
