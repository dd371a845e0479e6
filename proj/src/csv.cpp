#include "equicorr/csv.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace equicorr {
namespace {

void write_cell_key(const ExperimentCell& cell, std::ostream& out) {
  const auto& p = cell.params;
  out << p.m << ',' << (p.beta ? format_number(*p.beta) : std::string()) << ','
      << format_number(p.sigma0_sq) << ',' << format_number(p.tau_sq) << ','
      << format_number(p.rho);
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

void write_stats(const std::optional<MethodStats>& s, std::ostream& out) {
  if (!s) {
    out << ",,,";
    return;
  }
  out << format_number(s->mean_total_error) << ',' << format_number(s->mean_fp) << ','
      << format_number(s->mean_fn) << ',' << format_number(s->se_total_error);
}

void write_method_header(const ExperimentTable& table, std::ostream& out) {
  out << "m,beta,sigma0_sq,tau_sq,rho";
  if (!table.rows.empty()) {
    for (const auto& method : table.rows.front().cell.methods) out << ',' << method_name(method);
  }
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

void write_csv(const ExperimentTable& table, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.cell.methods.size(); ++k) {
      write_cell_key(row.cell, out);
      out << ',' << method_name(row.cell.methods[k]) << ',';
      write_stats(row.result.methods[k], out);
      out << ',' << optional_number(row.result.discrepancy[k]) << '\n';
    }
    write_cell_key(row.cell, out);
    out << ",ideal,";
    write_stats(row.result.ideal, out);
    out << ",\n";
  }
}

void write_csv(const ExperimentTable& table, const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + destination.string() + " for writing");
  write_csv(table, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + destination.string());
}

void write_error_table(const ExperimentTable& table, std::ostream& out) {
  write_method_header(table, out);
  out << ",ideal,determined_exact_risk\n";
  for (const auto& row : table.rows) {
    write_cell_key(row.cell, out);
    for (const auto& s : row.result.methods) {
      out << ',' << (s ? format_number(s->mean_total_error) : std::string());
    }
    out << ',' << format_number(row.result.ideal.mean_total_error) << ',';
    try {
      out << format_number(exact_risk(row.cell.params, determined_threshold(row.cell.params)).risk);
    } catch (const NoPositiveThreshold&) {
    }
    out << '\n';
  }
}

void write_discrepancy_table(const ExperimentTable& table, std::ostream& out) {
  write_method_header(table, out);
  out << '\n';
  for (const auto& row : table.rows) {
    write_cell_key(row.cell, out);
    for (const auto& d : row.result.discrepancy) out << ',' << optional_number(d);
    out << '\n';
  }
}

}  // namespace equicorr
