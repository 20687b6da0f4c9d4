// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Every tolerance is pinned here, not configurable.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "disarr/burgers.hpp"
#include "disarr/densities.hpp"
#include "disarr/isotropic.hpp"
#include "disarr/oracle.hpp"
#include "disarr/rng.hpp"
#include "disarr/tilted.hpp"
#include "support.hpp"

using namespace disarr;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
  std::string name;
  double time_limit_s;
  std::function<bool(std::string&)> run;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- criterion 1
bool isotropic_frame_correctness(std::string& detail) {
  SplitMix64 rng(1001);
  double worst_residual = 0.0, worst_ortho = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int dim = 2 + i % 5;  // 2..6
    const Matrix a = testsupport::random_traceless_symmetric(dim, rng);
    const double scale = frobenius_norm(a);
    const IsotropicFrame frame = isotropic_frame(a);
    for (int r = 0; r < dim; ++r) {
      const Vector& v = frame.vectors[static_cast<std::size_t>(r)];
      worst_residual = std::max(worst_residual, std::abs(a.apply(v).dot(v)) / (scale + 1e-300));
      for (int c = 0; c < dim; ++c) {
        const double g = v.dot(frame.vectors[static_cast<std::size_t>(c)]);
        worst_ortho = std::max(worst_ortho, std::abs(g - (r == c ? 1.0 : 0.0)));
      }
    }
  }
  std::ostringstream os;
  os << "max residual/||A|| " << worst_residual << ", max ortho error " << worst_ortho;
  detail = os.str();
  return worst_residual <= 1e-10 && worst_ortho <= 1e-12;
}

// ---------------------------------------------------------------- criterion 2
bool minimizing_rotation_optimality(std::string& detail) {
  SplitMix64 rng(1002);
  double worst_obj = 0.0, worst_term = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int dim = 2 + i % 4;  // 2..5
    const Matrix m = testsupport::random_matrix(dim, rng, 2.0);
    const double scale = frobenius_norm(m) + 1.0;
    const MinimizingRotation mr = minimizing_rotation(m);
    worst_obj = std::max(worst_obj, std::abs(mr.objective - std::abs(trace(m))) / scale);
    for (double q : mr.per_term)
      worst_term = std::max(worst_term, std::abs(q - trace(m) / dim) / scale);
  }
  std::ostringstream os;
  os << "max objective error " << worst_obj << ", max per-term error " << worst_term;
  detail = os.str();
  return worst_obj <= 1e-10 && worst_term <= 1e-10;
}

// ---------------------------------------------------------------- criterion 3
bool rotation_lower_bound(std::string& detail) {
  SplitMix64 rng(1003);
  long violations = 0;
  long total = 0;
  double worst_margin = 1e300;
  for (int i = 0; i < 50; ++i) {
    const int dim = 2 + i % 4;
    const Matrix m = testsupport::random_matrix(dim, rng, 2.0);
    const double bound = std::abs(trace(m)) - 1e-10 * (frobenius_norm(m) + 1.0);
    for (int r = 0; r < 2000; ++r) {
      const Matrix rot = testsupport::random_rotation(dim, rng);
      const double v = rotation_objective(m, rot);
      worst_margin = std::min(worst_margin, v - bound);
      if (v < bound) ++violations;
      ++total;
    }
  }
  std::ostringstream os;
  os << total << " samples, " << violations << " violations, smallest margin " << worst_margin;
  detail = os.str();
  return violations == 0;
}

// ---------------------------------------------------------------- criterion 4
bool oracle_agreement(std::string& detail) {
  SplitMix64 rng(1004);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Matrix m = testsupport::random_matrix(2, rng, 2.0);
    const SearchReport rep = rotation_grid_search_2d(m, 10000);
    worst = std::max(worst,
                     std::abs(rep.best_value - std::abs(trace(m))) / (frobenius_norm(m) + 1.0));
  }
  std::ostringstream os;
  os << "max |grid - |tr||/(||M||+1) = " << worst;
  detail = os.str();
  return worst <= 1e-6;
}

// ------------------------------------------------------------- criteria 5 + 7
struct TiltOutcome {
  bool sandwich_ok = true;
  bool budget_ok = true;
  bool shrink_ok = true;
  bool face_sum_ok = true;
  double worst_face_sum_rel = 0.0;
  double worst_shrink = 1e300;
};

TiltOutcome run_tilt_block(int dim, int count, SplitMix64& rng) {
  TiltOutcome out;
  const int n = 50;
  for (int i = 0; i < count; ++i) {
    const Matrix m = testsupport::random_matrix(dim, rng);
    const double density = std::abs(trace(m));
    const double mnorm = frobenius_norm(m);
    const double slack = 1e-10 * (mnorm + 1.0);
    double prev_budget = -1.0;
    for (int res : {16, 32, 64, 128}) {
      const TiltedTiling tiling = build_tiling(m, n, res);
      const EnergyBreakdown b = tiling_energy(tiling);
      const double side = 2.0 * tiling.inner_half_width();
      const double bb = std::sqrt(static_cast<double>(dim)) / res * mnorm * 2.0 * dim *
                        std::pow(side, dim - 1);
      const double ieb = 2.0 * density * b.straddle_volume;
      const double lower = density * b.interior_volume;

      if (!(b.energy >= lower - slack && b.energy - lower <= ieb + bb + slack))
        out.sandwich_ok = false;
      const double target = density * std::pow(side, dim);
      if (!(std::abs(b.energy - target) <= ieb + bb + slack)) out.budget_ok = false;

      const double budget = ieb + bb;
      if (prev_budget > 0.0) {
        const double ratio = prev_budget / budget;
        out.worst_shrink = std::min(out.worst_shrink, ratio);
        if (ratio < 1.8) out.shrink_ok = false;
      }
      prev_budget = budget;

      // face-sum identity over fully interior cells
      const double expect = density * b.interior_volume;
      const double rel = std::abs(b.assigned_face_sum - expect) /
                         std::max(std::abs(expect), 1e-300);
      if (b.interior_volume > 0.0) {
        out.worst_face_sum_rel = std::max(out.worst_face_sum_rel, rel);
        if (rel > 1e-12) out.face_sum_ok = false;
      }
    }
  }
  return out;
}

TiltOutcome g_tilt2, g_tilt3;

bool tilted_cube_convergence(std::string& detail) {
  SplitMix64 rng(1005);
  g_tilt2 = run_tilt_block(2, 20, rng);
  g_tilt3 = run_tilt_block(3, 5, rng);
  std::ostringstream os;
  os << "worst shrink factor " << std::min(g_tilt2.worst_shrink, g_tilt3.worst_shrink);
  detail = os.str();
  return g_tilt2.sandwich_ok && g_tilt2.budget_ok && g_tilt2.shrink_ok && g_tilt3.sandwich_ok &&
         g_tilt3.budget_ok && g_tilt3.shrink_ok;
}

// ---------------------------------------------------------------- criterion 6
bool directional_convergence(std::string& detail) {
  SplitMix64 rng(1006);
  bool ok = true;
  double worst_shrink = 1e300;
  for (int i = 0; i < 20; ++i) {
    const Matrix m = testsupport::random_matrix(2, rng);
    const Vector a = testsupport::random_vector(2, rng, 2.0);
    const double slack = 1e-10 * (frobenius_norm(m) + 1.0) * (a.norm() + 1.0);
    double prev_budget = -1.0;
    for (int res : {16, 32, 64, 128}) {
      const ConvergenceRow row = directional_energy(m, a, 50, res);
      if (!(std::abs(row.energy - row.target) <=
            row.interior_excess_bound + row.boundary_bound + slack))
        ok = false;
      const double budget = row.interior_excess_bound + row.boundary_bound;
      if (prev_budget > 0.0) {
        worst_shrink = std::min(worst_shrink, prev_budget / budget);
        if (prev_budget / budget < 1.8) ok = false;
      }
      prev_budget = budget;
    }
  }
  std::ostringstream os;
  os << "worst shrink factor " << worst_shrink;
  detail = os.str();
  return ok;
}

// ---------------------------------------------------------------- criterion 7
bool interior_face_sum(std::string& detail) {
  std::ostringstream os;
  os << "max relative deviation " << std::max(g_tilt2.worst_face_sum_rel,
                                              g_tilt3.worst_face_sum_rel);
  detail = os.str();
  return g_tilt2.face_sum_ok && g_tilt3.face_sum_ok;
}

// ---------------------------------------------------------------- criterion 8
bool volume_swept_identities(std::string& detail) {
  SplitMix64 rng(1008);
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const int nx = 1 + static_cast<int>(rng.next_u64() % 3);
    const int ny = 1 + static_cast<int>(rng.next_u64() % 3);
    const StructuredDeformationMesh mesh = testsupport::random_grid_mesh(nx, ny, rng);
    std::vector<int> region(mesh.cells().size());
    std::iota(region.begin(), region.end(), 0);
    const DisarrangementReport rep = disarrangement_report(mesh, region);
    const double scale = std::abs(rep.v_abs) + std::abs(rep.signed_total) + 1.0;
    worst = std::max(worst,
                     std::abs(rep.v_plus - 0.5 * rep.v_abs - 0.5 * rep.signed_total) / scale);
    worst = std::max(worst,
                     std::abs(rep.v_minus - 0.5 * rep.v_abs + 0.5 * rep.signed_total) / scale);
  }
  if (worst > 1e-12) {
    detail = "identity residual " + std::to_string(worst);
    return false;
  }

  // hand-built meshes reproduce their volumes exactly
  std::vector<MeshCell> id_cells;
  id_cells.emplace_back(
      std::vector<Vector>{Vector{0.0, 0.0}, Vector{1.0, 0.0}, Vector{1.0, 1.0}, Vector{0.0, 1.0}},
      Matrix::identity(2), Vector::zero(2), Matrix(2));
  const StructuredDeformationMesh id_mesh(2, std::move(id_cells), {});
  const double v_identity = volume_swept(id_mesh, {0}, DensityVariant::abs);

  std::vector<MeshCell> jump_cells;
  jump_cells.emplace_back(
      std::vector<Vector>{Vector{0.0, 0.0}, Vector{0.5, 0.0}, Vector{0.5, 1.0}, Vector{0.0, 1.0}},
      Matrix::identity(2), Vector::zero(2), Matrix::identity(2));
  jump_cells.emplace_back(
      std::vector<Vector>{Vector{0.5, 0.0}, Vector{1.0, 0.0}, Vector{1.0, 1.0}, Vector{0.5, 1.0}},
      Matrix::identity(2), Vector{0.5, 0.0}, Matrix::identity(2));
  std::vector<MeshJumpFace> jump_faces;
  jump_faces.push_back(MeshJumpFace{{Vector{0.5, 0.0}, Vector{0.5, 1.0}},
                                    Vector{1.0, 0.0},
                                    Vector{0.5, 0.0},
                                    Matrix(2)});
  const StructuredDeformationMesh jump_mesh(2, std::move(jump_cells), std::move(jump_faces));
  const double v_jump = volume_swept(jump_mesh, {0, 1}, DensityVariant::abs);

  std::ostringstream os;
  os << "identity residual " << worst << ", hand-built sweeps " << v_identity << " and "
     << v_jump;
  detail = os.str();
  return v_identity == 2.0 && v_jump == 0.5;
}

// ---------------------------------------------------------------- criterion 9
struct CliRun {
  int exit_code;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(DISARR_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  return {WEXITSTATUS(pclose(pipe)), out};
}

Matrix smooth_generic_field(const Vector& x) {
  Matrix m(3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      m(r, c) = std::sin((r + 1) * x[0] + 0.7 * (c + 1) * x[1] + 0.3 * (r + c + 1) * x[2]);
  return m;
}

bool burgers_stokes(std::string& detail) {
  // CLI on the analytic shear field
  nlohmann::json field;
  field["origin"] = {0.0, 0.0, 0.0};
  field["spacing"] = {0.25, 0.25, 0.25};
  field["counts"] = {5, 5, 5};
  std::vector<double> values;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) {
        const double node[9] = {0, 0, 0, 0, 0, 0, 0.25 * j, 0, 0};
        values.insert(values.end(), node, node + 9);
      }
  field["values"] = values;
  field["loops"] = {{{0.0, 0.0, 0.5},
                     {1.0, 0.0, 0.5},
                     {1.0, 1.0, 0.5},
                     {0.0, 1.0, 0.5},
                     {0.0, 0.0, 0.5}}};
  nlohmann::json surf;
  surf["vertices"] = {{0.0, 0.0, 0.5}, {1.0, 0.0, 0.5}, {1.0, 1.0, 0.5}, {0.0, 1.0, 0.5}};
  surf["triangles"] = {{0, 1, 2}, {0, 2, 3}};
  field["surfaces"] = {surf};
  const std::string path = "/tmp/disarr_acceptance_field.json";
  {
    std::ofstream f(path);
    f << field.dump();
  }
  const CliRun run = run_cli("burgers " + path);
  if (run.exit_code != 0) {
    detail = "CLI burgers exited with " + std::to_string(run.exit_code);
    return false;
  }
  const nlohmann::json rep = nlohmann::json::parse(run.out);
  const double expected[3] = {0.0, 0.0, -1.0};
  for (int c = 0; c < 3; ++c) {
    if (std::abs(rep["line_integral"][c].get<double>() - expected[c]) > 1e-10 ||
        std::abs(rep["surface_integral"][c].get<double>() - expected[c]) > 1e-10) {
      detail = "analytic field integrals off: " + run.out;
      return false;
    }
  }

  // refinement order of the Stokes residual for a smooth generic field
  std::vector<double> residuals;
  for (int level = 0; level <= 3; ++level) {
    const int count = 8 * (1 << level) + 1;
    const double h = 1.0 / (count - 1);
    std::vector<Matrix> nodes;
    nodes.reserve(static_cast<std::size_t>(count) * count * count);
    for (int i = 0; i < count; ++i)
      for (int j = 0; j < count; ++j)
        for (int k = 0; k < count; ++k)
          nodes.push_back(smooth_generic_field(Vector{i * h, j * h, k * h}));
    const SampledTensorField f(Vector{0, 0, 0}, Vector{h, h, h}, {count, count, count},
                               std::move(nodes));

    const int ksub = 4 << level;
    const double corner = 0.3, size = 0.4, z = 0.5;
    const double hs = size / ksub;
    std::vector<Vector> ring;
    for (int i = 0; i < ksub; ++i) ring.push_back(Vector{corner + i * hs, corner, z});
    for (int i = 0; i < ksub; ++i) ring.push_back(Vector{corner + size, corner + i * hs, z});
    for (int i = 0; i < ksub; ++i)
      ring.push_back(Vector{corner + size - i * hs, corner + size, z});
    for (int i = 0; i < ksub; ++i)
      ring.push_back(Vector{corner, corner + size - i * hs, z});
    ring.push_back(ring.front());
    const OrientedLoop loop(ring);

    OrientedSurface surface;
    for (int i = 0; i <= ksub; ++i)
      for (int j = 0; j <= ksub; ++j)
        surface.vertices.push_back(Vector{corner + i * hs, corner + j * hs, z});
    auto id = [ksub](int i, int j) { return i * (ksub + 1) + j; };
    for (int i = 0; i < ksub; ++i)
      for (int j = 0; j < ksub; ++j) {
        surface.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        surface.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      }
    residuals.push_back(stokes_residual(f, loop, surface));
  }

  // least-squares slope of log2(residual) against the halving level
  double mean_l = 0.0, mean_r = 0.0;
  for (int l = 0; l <= 3; ++l) {
    mean_l += l;
    mean_r += std::log2(residuals[static_cast<std::size_t>(l)]);
  }
  mean_l /= 4.0;
  mean_r /= 4.0;
  double num = 0.0, den = 0.0;
  for (int l = 0; l <= 3; ++l) {
    num += (l - mean_l) * (std::log2(residuals[static_cast<std::size_t>(l)]) - mean_r);
    den += (l - mean_l) * (l - mean_l);
  }
  const double order = -num / den;
  std::ostringstream os;
  os << "refinement order " << order << ", residuals";
  for (double r : residuals) os << " " << r;
  detail = os.str();
  return order >= 1.9;
}

// --------------------------------------------------------------- criterion 10
bool norm_and_density_hypotheses(std::string& detail) {
  SplitMix64 rng(1010);
  long violations = 0;

  for (int i = 0; i < 1000; ++i) {
    const int dim = 2 + static_cast<int>(rng.next_u64() % 4);
    const Matrix a = testsupport::random_matrix(dim, rng, 2.0);
    const Matrix b = testsupport::random_matrix(dim, rng, 2.0);
    const double c = rng.uniform(-3.0, 3.0);
    if (row_max_norm(a) < 0.0) ++violations;
    if (std::abs(row_max_norm(a * c) - std::abs(c) * row_max_norm(a)) > 1e-12) ++violations;
    if (row_max_norm(a + b) > row_max_norm(a) + row_max_norm(b) + 1e-12) ++violations;
  }

  for (int i = 0; i < 1000; ++i) {
    const int dim = 2 + static_cast<int>(rng.next_u64() % 2);
    const Vector xi = testsupport::random_vector(dim, rng, 2.0);
    const Vector xi2 = testsupport::random_vector(dim, rng, 2.0);
    const Vector nu = testsupport::random_unit_vector(dim, rng);
    const double t = rng.uniform(0.0, 3.0) + 1e-9;
    for (DensityVariant v :
         {DensityVariant::abs, DensityVariant::plus, DensityVariant::minus}) {
      const double psi = relaxed_interfacial(xi, nu, v);
      if (psi < 0.0 || psi > xi.norm() + 1e-12) ++violations;                      // H1, C = 1
      if (std::abs(relaxed_interfacial(xi * t, nu, v) - t * psi) > 1e-12 * (1 + psi))
        ++violations;                                                              // H2
      if (relaxed_interfacial(xi + xi2, nu, v) >
          psi + relaxed_interfacial(xi2, nu, v) + 1e-12)
        ++violations;                                                              // H3
    }
  }
  detail = std::to_string(violations) + " violations";
  return violations == 0;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {"isotropic frame correctness (500 matrices, N=2..6)", 5.0, isotropic_frame_correctness},
      {"minimizing rotation optimality (500 matrices, N=2..5)", 5.0,
       minimizing_rotation_optimality},
      {"rotation lower bound (1e5 samples)", 30.0, rotation_lower_bound},
      {"oracle agreement (2-D grid vs closed form)", 10.0, oracle_agreement},
      {"tilted-cube convergence (N=2 and N=3, n=50)", 120.0, tilted_cube_convergence},
      {"directional density convergence (20 pairs, N=2)", 60.0, directional_convergence},
      {"interior face-sum identity", 5.0, interior_face_sum},
      {"volume-swept identities (30 meshes + hand-built)", 5.0, volume_swept_identities},
      {"circulation equals dislocation flux (CLI + refinement)", 30.0, burgers_stokes},
      {"norm axioms and density hypotheses (1000 each)", 5.0, norm_and_density_hypotheses},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Clock::time_point t0 = Clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
      ok = false;
    }
    const double elapsed = seconds_since(t0);
    if (elapsed > criteria[i].time_limit_s) {
      ok = false;
      detail += " [over time limit]";
    }
    std::printf("[%s] criterion %zu: %s (%.2fs, limit %.0fs) %s\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name.c_str(), elapsed, criteria[i].time_limit_s, detail.c_str());
    if (!ok) ++failures;
  }
  if (failures == 0) std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
