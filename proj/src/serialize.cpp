#include "tfp/serialize.hpp"

#include <cstdio>
#include <fstream>

namespace tfp {

namespace {

struct CsvFile {
  std::ofstream out;

  CsvFile(const std::filesystem::path& file, const char* header) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    out.open(file);
    if (!out) throw Error("cannot open " + file.string() + " for writing");
    out << header << "\n";
  }

  void row(std::initializer_list<double> cells) {
    char buf[32];
    bool first = true;
    for (double v : cells) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << (first ? "" : ",") << buf;
      first = false;
    }
    out << "\n";
  }
};

}  // namespace

void to_json(json& j, const Grid1D& g) { j = json{{"N", g.N}, {"L", g.L}}; }

void to_json(json& j, const PhasePoint& z) { j = json{{"x", z.x}, {"xi", z.xi}}; }

void to_json(json& j, const SymplecticMatrix& A) {
  j = json{{"matrix", {A.m(0, 0), A.m(0, 1), A.m(1, 0), A.m(1, 1)}},
           {"blocks", {{"A", A.m(0, 0)}, {"B", A.m(0, 1)}, {"C", A.m(1, 0)}, {"D", A.m(1, 1)}}}};
}

void to_json(json& j, const DecayFit& fit) {
  j = json{{"s_fit", fit.s_fit},
           {"C_fit", fit.C_fit},
           {"residual", fit.residual},
           {"shells", fit.shells_used}};
}

void to_json(json& j, const SectorGrid& sec) {
  j = json{{"K", sec.K}, {"r0", sec.r0}, {"R", sec.R}, {"shells", sec.shells}};
}

void to_json(json& j, const WaveFrontEstimate& wf) {
  json params = wf.sectors;
  params["p"] = std::isinf(wf.p) ? json("inf") : json(wf.p);
  params["r"] = wf.r;
  params["rho_threshold"] = wf.rho_threshold;
  json sectors = json::array();
  for (const SectorRecord& rec : wf.records) {
    sectors.push_back({{"angle_deg", rec.angle_deg},
                       {"rho", rec.rho},
                       {"integral", rec.integral},
                       {"singular", rec.singular}});
  }
  j = json{{"params", params}, {"sectors", sectors}};
}

void to_json(json& j, const PropagatorResult& res) {
  j = json{{"method", res.method}, {"t", res.t}, {"diagnostics", res.diagnostics}};
}

void to_json(json& j, const GaborCoefficients& F) {
  std::vector<double> flat;
  flat.reserve(2 * size_t(F.values.size()));
  for (int a = 0; a < F.count_x(); ++a) {
    for (int b = 0; b < F.count_xi(); ++b) {
      flat.push_back(F.values(a, b).real());
      flat.push_back(F.values(a, b).imag());
    }
  }
  j = json{{"grid", F.grid},
           {"lattice",
            {{"alpha", F.alpha},
             {"beta", F.beta},
             {"count_x", F.count_x()},
             {"count_xi", F.count_xi()}}},
           {"layout", "row-major over time then frequency, re/im interleaved"},
           {"values", std::move(flat)}};
}

void to_json(json& j, const SymbolGrid& sigma) {
  std::vector<double> flat;
  flat.reserve(2 * size_t(sigma.values.size()));
  for (int a = 0; a < sigma.values.rows(); ++a) {
    for (int b = 0; b < sigma.values.cols(); ++b) {
      flat.push_back(sigma.values(a, b).real());
      flat.push_back(sigma.values(a, b).imag());
    }
  }
  j = json{{"xgrid", sigma.xgrid},
           {"xigrid", sigma.xigrid},
           {"real_valued", sigma.real_valued},
           {"layout", "row-major over x then frequency, re/im interleaved"},
           {"values", std::move(flat)}};
}

void write_csv(const std::filesystem::path& file, const SampledSignal& f) {
  CsvFile csv(file, "x,re,im");
  for (int j = 0; j < f.grid.N; ++j)
    csv.row({f.grid.x(j), f.values[j].real(), f.values[j].imag()});
}

void write_csv(const std::filesystem::path& file, const GaborCoefficients& F) {
  CsvFile csv(file, "x,xi,re,im");
  for (int a = 0; a < F.count_x(); ++a)
    for (int b = 0; b < F.count_xi(); ++b)
      csv.row({F.x(a), F.xi(b), F.values(a, b).real(), F.values(a, b).imag()});
}

void write_csv(const std::filesystem::path& file, const SymbolGrid& sigma) {
  CsvFile csv(file, "x,xi,re,im");
  for (int a = 0; a < sigma.values.rows(); ++a)
    for (int b = 0; b < sigma.values.cols(); ++b)
      csv.row({sigma.xgrid.x(a), sigma.xigrid.x(b), sigma.values(a, b).real(),
               sigma.values(a, b).imag()});
}

void write_csv(const std::filesystem::path& file, const GaborMatrixSample& K) {
  CsvFile csv(file, "w_x,w_xi,z_x,z_xi,abs,arg");
  for (size_t w = 0; w < K.out_points.size(); ++w) {
    for (size_t z = 0; z < K.in_points.size(); ++z) {
      const cd v = K.values(w, z);
      csv.row({K.out_points[w].x, K.out_points[w].xi, K.in_points[z].x, K.in_points[z].xi,
               std::abs(v), std::arg(v)});
    }
  }
}

void write_csv(const std::filesystem::path& file, const WaveFrontEstimate& wf) {
  CsvFile csv(file,
              "sector,angle_deg,dir_x,dir_xi,rho,integral,refined_integral,threshold,singular");
  for (size_t k = 0; k < wf.records.size(); ++k) {
    const SectorRecord& rec = wf.records[k];
    csv.row({double(k), rec.angle_deg, rec.dir[0], rec.dir[1], rec.rho, rec.integral,
             rec.refined_integral, rec.threshold, rec.singular ? 1.0 : 0.0});
  }
}

void write_kernel_csv(const std::filesystem::path& file, const WeylOperator& op) {
  CsvFile csv(file, "x_out,x_in,re,im");
  for (int i = 0; i < op.kernel.rows(); ++i)
    for (int j = 0; j < op.kernel.cols(); ++j)
      csv.row({op.grid.x(i), op.grid.x(j), op.kernel(i, j).real(), op.kernel(i, j).imag()});
}

void write_json(const std::filesystem::path& file, const json& j) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw Error("cannot open " + file.string() + " for writing");
  out << j.dump(2) << "\n";
}

}  // namespace tfp
