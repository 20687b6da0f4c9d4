#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "disarr/errors.hpp"
#include "disarr/io.hpp"
#include "disarr/isotropic.hpp"
#include "disarr/oracle.hpp"
#include "disarr/rng.hpp"
#include "disarr/tilted.hpp"

using nlohmann::ordered_json;

namespace {

struct OutputSink {
  std::string path = "-";

  void write(const std::string& text) const {
    if (path == "-") {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream out(path);
    if (!out) throw disarr::parse_error("cannot open output file " + path);
    out << text;
  }
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ordered_json vector_json(const disarr::Vector& v) {
  ordered_json arr = ordered_json::array();
  for (int i = 0; i < v.dim(); ++i) arr.push_back(v[i]);
  return arr;
}

// Exit-code contract: 2 unreadable/ill-formed input (3 for frame-specific
// validation), 4 dimension mismatch, 5 unsupported dimension, 6 mesh jump
// inconsistency, 7 geometry outside the sampled grid.
template <typename Fn>
int guarded(int validation_code, Fn&& fn) {
  try {
    return fn();
  } catch (const disarr::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const disarr::dimension_mismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const disarr::unsupported_dimension& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const disarr::mesh_consistency_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  } catch (const disarr::geometry_out_of_bounds& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 7;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return validation_code;
  }
}

int run_frame(const std::string& matrix_path, const OutputSink& sink) {
  return guarded(3, [&] {
    const disarr::Matrix a = disarr::load_matrix(matrix_path);
    const disarr::IsotropicFrame frame = disarr::isotropic_frame(a);

    double max_residual = 0.0;
    double ortho = 0.0;
    ordered_json vectors = ordered_json::array();
    ordered_json quad = ordered_json::array();
    for (int i = 0; i < frame.dim; ++i) {
      const disarr::Vector& v = frame.vectors[static_cast<std::size_t>(i)];
      vectors.push_back(vector_json(v));
      const double q = a.apply(v).dot(v);
      quad.push_back(q);
      max_residual = std::max(max_residual, std::abs(q));
      for (int j = 0; j < frame.dim; ++j) {
        const double g = v.dot(frame.vectors[static_cast<std::size_t>(j)]);
        ortho = std::max(ortho, std::abs(g - (i == j ? 1.0 : 0.0)));
      }
    }

    ordered_json doc;
    doc["dim"] = frame.dim;
    doc["trace"] = disarr::trace(a);
    doc["vectors"] = vectors;
    doc["quadratic_forms"] = quad;
    doc["max_residual"] = max_residual;
    doc["orthogonality_error"] = ortho;
    sink.write(doc.dump(2) + "\n");
    return 0;
  });
}

int run_relax(const std::string& a_path, const std::string& b_path,
              const std::vector<double>& direction, const OutputSink& sink) {
  return guarded(2, [&] {
    const disarr::Matrix a = disarr::load_matrix(a_path);
    const disarr::Matrix b = disarr::load_matrix(b_path);

    ordered_json doc;
    doc["dim"] = a.dim();
    doc["H_abs"] = disarr::relaxed_bulk(a, b, disarr::DensityVariant::abs);
    doc["H_plus"] = disarr::relaxed_bulk(a, b, disarr::DensityVariant::plus);
    doc["H_minus"] = disarr::relaxed_bulk(a, b, disarr::DensityVariant::minus);
    if (!direction.empty()) {
      const disarr::Vector dir{std::vector<double>(direction)};
      doc["direction"] = vector_json(dir);
      doc["H_directional"] = disarr::relaxed_bulk_directional(a, b, dir);
    }
    sink.write(doc.dump(2) + "\n");
    return 0;
  });
}

int run_tilt(const std::string& matrix_path, std::vector<int> n_list, std::vector<int> m_list,
             const std::string& mode, const std::vector<double>& direction, double cn, bool check,
             const std::string& format, const OutputSink& sink) {
  return guarded(2, [&] {
    const disarr::Matrix m = disarr::load_matrix(matrix_path);
    std::unique_ptr<disarr::Vector> dir;
    disarr::EnergyMode emode = disarr::EnergyMode::normal;
    if (mode == "directional") {
      if (direction.empty())
        throw disarr::parse_error("tilt: directional mode needs --direction");
      dir = std::make_unique<disarr::Vector>(std::vector<double>(direction));
      emode = disarr::EnergyMode::directional;
    }

    const std::vector<disarr::ConvergenceRow> rows =
        disarr::convergence_study(m, n_list, m_list, emode, dir.get(), cn);

    if (check) {
      for (const disarr::ConvergenceRow& row : rows) {
        const double budget = row.interior_excess_bound + row.boundary_bound;
        const double slack = 1e-9 * (std::abs(row.target) + 1.0);
        if (std::abs(row.energy - row.target) > budget + slack) {
          std::cerr << "check failed at n=" << row.n << " m=" << row.m << "\n";
          return 1;
        }
      }
      std::cerr << "check ok: " << rows.size() << " rows within bounds\n";
    }

    if (format == "json") {
      ordered_json arr = ordered_json::array();
      for (const disarr::ConvergenceRow& r : rows) {
        ordered_json row;
        row["n"] = r.n;
        row["m"] = r.m;
        row["energy"] = r.energy;
        row["target"] = r.target;
        row["boundary_bound"] = r.boundary_bound;
        row["interior_excess_bound"] = r.interior_excess_bound;
        row["frame_bound"] = r.frame_bound;
        arr.push_back(row);
      }
      sink.write(arr.dump(2) + "\n");
    } else {
      std::string csv = "# disarrangement-kit v1\n";
      csv += "n,m,energy,target,boundary_bound,interior_excess_bound,frame_bound\n";
      for (const disarr::ConvergenceRow& r : rows) {
        csv += std::to_string(r.n) + "," + std::to_string(r.m) + "," + format_double(r.energy) +
               "," + format_double(r.target) + "," + format_double(r.boundary_bound) + "," +
               format_double(r.interior_excess_bound) + "," + format_double(r.frame_bound) + "\n";
      }
      sink.write(csv);
    }
    return 0;
  });
}

int run_sweep(const std::string& mesh_path, const std::vector<int>& region_arg,
              const OutputSink& sink) {
  return guarded(2, [&] {
    const disarr::StructuredDeformationMesh mesh = disarr::load_mesh(mesh_path);
    std::vector<int> region = region_arg;
    if (region.empty()) {
      region.resize(mesh.cells().size());
      std::iota(region.begin(), region.end(), 0);
    }
    const disarr::DisarrangementReport rep = disarr::disarrangement_report(mesh, region);

    ordered_json doc;
    doc["dim"] = mesh.dim();
    doc["cells"] = mesh.cells().size();
    doc["region_cells"] = region.size();
    doc["bulk_abs"] = rep.bulk_abs;
    doc["bulk_plus"] = rep.bulk_plus;
    doc["bulk_minus"] = rep.bulk_minus;
    doc["interfacial_abs"] = rep.interfacial_abs;
    doc["interfacial_plus"] = rep.interfacial_plus;
    doc["interfacial_minus"] = rep.interfacial_minus;
    doc["V_abs"] = rep.v_abs;
    doc["V_plus"] = rep.v_plus;
    doc["V_minus"] = rep.v_minus;
    doc["signed_total"] = rep.signed_total;
    doc["identity_residual_plus"] =
        rep.v_plus - 0.5 * rep.v_abs - 0.5 * rep.signed_total;
    doc["identity_residual_minus"] =
        rep.v_minus - 0.5 * rep.v_abs + 0.5 * rep.signed_total;
    sink.write(doc.dump(2) + "\n");
    return 0;
  });
}

int run_burgers(const std::string& field_path, int loop_id, int surface_id, bool flip,
                const OutputSink& sink) {
  return guarded(2, [&] {
    const disarr::FieldDocument doc = disarr::load_field_document(field_path);
    if (loop_id < 0 || loop_id >= static_cast<int>(doc.loops.size()))
      throw disarr::parse_error("burgers: loop index out of range");
    if (surface_id < 0 || surface_id >= static_cast<int>(doc.surfaces.size()))
      throw disarr::parse_error("burgers: surface index out of range");

    disarr::OrientedLoop loop = doc.loops[static_cast<std::size_t>(loop_id)];
    disarr::OrientedSurface surface = doc.surfaces[static_cast<std::size_t>(surface_id)];
    if (flip) {
      loop = loop.reversed();
      surface = surface.flipped();
    }

    const disarr::Vector line = disarr::line_integral(doc.field, loop);
    const disarr::SampledTensorField curl = disarr::curl_matrix_field(doc.field);
    const disarr::Vector flux = disarr::surface_integral(curl, surface);
    const double residual = disarr::stokes_residual(doc.field, loop, surface);

    ordered_json out;
    out["line_integral"] = vector_json(line);
    out["surface_integral"] = vector_json(flux);
    out["stokes_residual"] = residual;
    sink.write(out.dump(2) + "\n");
    return 0;
  });
}

int run_oracle(const std::string& matrix_path, const std::string& method, int resolution,
               int trials, std::uint64_t seed, int n, int m, int probe_offsets,
               int probe_rotations, const OutputSink& sink) {
  return guarded(2, [&] {
    const disarr::Matrix mat = disarr::load_matrix(matrix_path);

    std::string chosen = method;
    if (chosen == "auto") chosen = (mat.dim() == 2) ? "grid2d" : "random";

    disarr::SearchReport rep;
    if (chosen == "grid2d") {
      rep = disarr::rotation_grid_search_2d(mat, resolution);
    } else if (chosen == "random") {
      rep = disarr::rotation_random_search(mat, trials, seed);
    } else if (chosen == "probe") {
      std::vector<disarr::Vector> offsets{disarr::Vector::zero(mat.dim())};
      disarr::SplitMix64 rng(seed);
      for (int i = 1; i < probe_offsets; ++i) {
        disarr::Vector off(mat.dim());
        for (int c = 0; c < mat.dim(); ++c) off[c] = rng.uniform();
        offsets.push_back(off);
      }
      std::vector<disarr::Matrix> rotations{disarr::minimizing_rotation(mat).rotation};
      for (int i = 1; i < probe_rotations; ++i)
        rotations.push_back(
            disarr::rotation_random_search(mat, 1, rng.next_u64()).rotation);
      rep = disarr::infimum_probe(mat, n, m, offsets, rotations);
      rep.seed = seed;
    } else {
      throw disarr::parse_error("oracle: unknown method " + method);
    }

    ordered_json out;
    out["method"] = chosen;
    out["dim"] = mat.dim();
    out["best_value"] = rep.best_value;
    out["best_parameters"] = rep.best_parameters;
    ordered_json rot = ordered_json::array();
    for (double e : rep.rotation.entries()) rot.push_back(e);
    out["rotation"] = rot;
    out["evaluations"] = rep.evaluations;
    out["seed"] = rep.seed;
    out["trace_lower_bound"] = std::abs(disarr::trace(mat));
    sink.write(out.dump(2) + "\n");
    return 0;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"disarrangement-kit: isotropic frames, tilted-cube jump energies,\n"
               "disarrangement densities and Burgers-vector field calculus"};
  app.require_subcommand(1);

  OutputSink sink;
  std::string format = "json";
  std::uint64_t seed = 12345;
  double cn = 1.0;
  bool check = false;
  app.add_option("--output", sink.path, "output file, '-' for stdout")->capture_default_str();
  app.add_option("--format", format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--seed", seed, "seed for randomized searches")->capture_default_str();
  app.add_option("--cn", cn, "frame allowance constant")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--check", check, "verify bound inequalities on computed rows");

  // frame
  std::string frame_matrix;
  auto* cmd_frame = app.add_subcommand("frame", "isotropic frame of a traceless symmetric matrix");
  cmd_frame->add_option("matrix", frame_matrix, "matrix file")->required();

  // relax
  std::string relax_a, relax_b;
  std::vector<double> relax_dir;
  auto* cmd_relax = app.add_subcommand("relax", "closed-form relaxed densities for a pair (A, B)");
  cmd_relax->add_option("A", relax_a, "matrix file for A")->required();
  cmd_relax->add_option("B", relax_b, "matrix file for B")->required();
  cmd_relax->add_option("--direction", relax_dir, "direction for the directional density");

  // tilt
  std::string tilt_matrix, tilt_mode = "normal";
  std::vector<int> tilt_n{10}, tilt_m{16};
  std::vector<double> tilt_dir;
  auto* cmd_tilt = app.add_subcommand("tilt", "tilted-cube jump energies and bounds");
  cmd_tilt->add_option("matrix", tilt_matrix, "matrix file")->required();
  cmd_tilt->add_option("--n-list", tilt_n, "frame indices")->check(CLI::PositiveNumber);
  cmd_tilt->add_option("--m-list", tilt_m, "resolutions")->check(CLI::PositiveNumber);
  cmd_tilt->add_option("--mode", tilt_mode, "normal or directional")
      ->check(CLI::IsMember({"normal", "directional"}));
  cmd_tilt->add_option("--direction", tilt_dir, "direction for directional mode");

  // sweep
  std::string sweep_mesh;
  std::vector<int> sweep_region;
  auto* cmd_sweep = app.add_subcommand("sweep", "disarrangement volumes of a mesh region");
  cmd_sweep->add_option("mesh", sweep_mesh, "mesh file")->required();
  cmd_sweep->add_option("--region", sweep_region, "cell ids (default: all cells)");

  // burgers
  std::string burgers_field;
  int burgers_loop = 0, burgers_surface = 0;
  bool burgers_flip = false;
  auto* cmd_burgers = app.add_subcommand("burgers", "circulation and dislocation flux of a field");
  cmd_burgers->add_option("field", burgers_field, "field file")->required();
  cmd_burgers->add_option("--loop", burgers_loop, "loop index")->capture_default_str();
  cmd_burgers->add_option("--surface", burgers_surface, "surface index")->capture_default_str();
  cmd_burgers->add_flag("--flip", burgers_flip, "reverse loop and surface orientation");

  // oracle
  std::string oracle_matrix, oracle_method = "auto";
  int oracle_resolution = 10000, oracle_trials = 10000, oracle_n = 50, oracle_m = 64;
  int probe_offsets = 4, probe_rotations = 8;
  auto* cmd_oracle = app.add_subcommand("oracle", "brute-force rotation and energy searches");
  cmd_oracle->add_option("matrix", oracle_matrix, "matrix file")->required();
  cmd_oracle->add_option("--method", oracle_method, "grid2d, random, probe or auto")
      ->check(CLI::IsMember({"grid2d", "random", "probe", "auto"}))
      ->capture_default_str();
  cmd_oracle->add_option("--resolution", oracle_resolution, "grid resolution")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_oracle->add_option("--trials", oracle_trials, "random trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_oracle->add_option("--n", oracle_n, "frame index for probe")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_oracle->add_option("--m", oracle_m, "resolution for probe")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_oracle->add_option("--probe-offsets", probe_offsets, "lattice offsets to try")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_oracle->add_option("--probe-rotations", probe_rotations, "rotations to try")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  if (cmd_frame->parsed()) return run_frame(frame_matrix, sink);
  if (cmd_relax->parsed()) return run_relax(relax_a, relax_b, relax_dir, sink);
  if (cmd_tilt->parsed())
    return run_tilt(tilt_matrix, tilt_n, tilt_m, tilt_mode, tilt_dir, cn, check, format, sink);
  if (cmd_sweep->parsed()) return run_sweep(sweep_mesh, sweep_region, sink);
  if (cmd_burgers->parsed())
    return run_burgers(burgers_field, burgers_loop, burgers_surface, burgers_flip, sink);
  if (cmd_oracle->parsed())
    return run_oracle(oracle_matrix, oracle_method, oracle_resolution, oracle_trials, seed,
                      oracle_n, oracle_m, probe_offsets, probe_rotations, sink);
  return 1;
}
