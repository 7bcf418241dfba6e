#include "kmr/acceptance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "kmr/mesh.hpp"
#include "kmr/moduli.hpp"
#include "kmr/special.hpp"

namespace kmr {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Vec3 = std::array<double, 3>;

Vec3 add3(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
Vec3 sub3(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
Vec3 scale3(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
double norm3(const Vec3& a) {
  return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}
Vec3 neg3(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
double max_diff3(const Vec3& a, const Vec3& b) {
  double m = 0.0;
  for (int k = 0; k < 3; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double lerp(double lo, double hi, int i, int n) {
  if (n <= 1) return 0.5 * (lo + hi);
  return lo + (hi - lo) * static_cast<double>(i) / (n - 1);
}

// grid over the admissible box, skipping the removed half-lines
std::vector<SurfaceParams> make_grid(int n) {
  std::vector<SurfaceParams> grid;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double theta = lerp(0.3, 1.3, i, n);
        const double alpha = lerp(-1.2, 1.2, j, n);
        const double beta = lerp(0.0, 2.6, k, n);
        if (!SurfaceParams::admissible(theta, alpha, beta)) continue;
        grid.push_back(SurfaceParams::make(theta, alpha, beta));
      }
  return grid;
}

struct Line {
  bool pass = true;
  double worst = 0.0;
  std::string note;

  void update(double value, double tol) {
    worst = std::max(worst, value);
    if (!(value <= tol)) pass = false;
  }
  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      if (note.empty()) note = why;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void print_line(std::ostream& out, int idx, const Line& r,
                const std::string& name, double tol) {
  out << (r.pass ? "PASS" : "FAIL") << "  " << idx << ". " << name
      << "  (worst " << fmt(r.worst) << ", tol " << fmt(tol) << ")";
  if (!r.note.empty()) out << "  [" << r.note << "]";
  out << "\n";
}

PeriodFlux cycle_pf(CycleName n, const SurfaceParams& p) {
  return period_flux(make_cycle(n, p), p);
}

}  // namespace

int run_acceptance(int grid_n, std::ostream& out) {
  if (grid_n < 1) throw DomainError("grid size must be at least 1");
  const auto grid = make_grid(grid_n);
  out << "verification battery over " << grid.size() << " parameter triples ("
      << grid_n << "^3 grid)\n";
  int failures = 0;

  // 1. height-form normalization: the integral over gamma2 is 2 pi i
  {
    constexpr double tol = 1e-8;
    Line r;
    for (const double theta : {0.2, 0.5, kPi / 4.0, 1.0, 1.35}) {
      const auto p = SurfaceParams::make(theta, 0.0, 0.0);
      const auto g = gauss_coeffs(p);
      const CVec<3> s = cycle_forms_integral(make_cycle(CycleName::Gamma2, p),
                                             p, g);
      r.update(std::abs(s[0] - Complex(0.0, 2.0 * kPi)), tol);
    }
    print_line(out, 1, r, "height-form normalization over the theta sweep",
               tol);
    failures += !r.pass;
  }

  // per-triple cycle data shared by criteria 2, 3, 4, 6
  struct TripleData {
    PeriodFlux a, ap, app, appp, g1, g2;
    PeriodFlux closed;
  };
  std::vector<TripleData> data(grid.size());
  for (size_t t = 0; t < grid.size(); ++t) {
    const auto& p = grid[t];
    data[t].a = cycle_pf(CycleName::GammaA, p);
    data[t].ap = cycle_pf(CycleName::GammaAPrime, p);
    data[t].app = cycle_pf(CycleName::GammaADoublePrime, p);
    data[t].appp = cycle_pf(CycleName::GammaATriplePrime, p);
    data[t].g1 = cycle_pf(CycleName::Gamma1, p);
    data[t].g2 = cycle_pf(CycleName::Gamma2, p);
    data[t].closed = end_period_flux_closed_form(p);
  }

  // 2. closed form vs quadrature for the end cycle
  {
    constexpr double tol = 1e-7;  // relative
    Line r;
    for (size_t t = 0; t < grid.size(); ++t) {
      const double scale = std::max(
          {1.0, norm3(data[t].closed.P), norm3(data[t].closed.F)});
      r.update(max_diff3(data[t].closed.P, data[t].a.P) / scale, tol);
      r.update(max_diff3(data[t].closed.F, data[t].a.F) / scale, tol);
    }
    print_line(out, 2, r, "closed-form end period and flux vs quadrature",
               tol);
    failures += !r.pass;
  }

  // 3. homology invariants of gamma1 and gamma2
  {
    constexpr double tol = 1e-8;
    constexpr double tol_f1 = 1e-7;
    Line r;
    for (size_t t = 0; t < grid.size(); ++t) {
      const auto& p = grid[t];
      r.update(norm3(data[t].g2.P), tol);
      r.update(std::abs(data[t].g2.F[2] - 2.0 * kPi), tol);
      const double f1 = f1_of_theta(p.theta);
      r.update(std::abs(data[t].g1.P[2] - f1) / std::max(1.0, std::abs(f1)),
               tol_f1);
      r.require(data[t].g1.P[2] < 0.0, "vertical period sign");
      r.update(max_diff3(data[t].g1.F, neg3(data[t].a.F)), tol);
    }
    print_line(out, 3, r, "homology periods and fluxes (gamma1, gamma2)",
               tol_f1);
    failures += !r.pass;
  }

  // 4. end relations: sign pattern of the four end cycles and residues
  {
    constexpr double tol = 1e-9;
    constexpr double tol_dh = 1e-10;
    Line r;
    for (size_t t = 0; t < grid.size(); ++t) {
      const auto& p = grid[t];
      const auto& d = data[t];
      const double scale =
          std::max({1.0, norm3(d.a.P), norm3(d.a.F)});
      r.update(max_diff3(d.ap.P, d.a.P) / scale, tol);
      r.update(max_diff3(d.app.P, neg3(d.a.P)) / scale, tol);
      r.update(max_diff3(d.appp.P, neg3(d.a.P)) / scale, tol);
      r.update(max_diff3(d.ap.F, neg3(d.a.F)) / scale, tol);
      r.update(max_diff3(d.app.F, neg3(d.a.F)) / scale, tol);
      r.update(max_diff3(d.appp.F, d.a.F) / scale, tol);

      const auto g = gauss_coeffs(p);
      const auto E = ends(p);
      const auto rA = residues_at_end(p, g, E.A);
      const auto rApp = residues_at_end(p, g, E.App);
      const auto rAp = residues_at_end(p, g, E.Ap);
      const auto rAppp = residues_at_end(p, g, E.Appp);
      for (const auto* res : {&rA, &rApp, &rAp, &rAppp})
        r.update(std::abs(res->height), tol_dh);
      r.update(std::abs(rA.g_times_height + rApp.g_times_height), tol);
      r.update(std::abs(rAp.height_over_g + rAppp.height_over_g), tol);
      r.update(std::abs(rAp.height_over_g - std::conj(rA.g_times_height)),
               tol);
      r.update(std::abs(rAppp.height_over_g + std::conj(rA.g_times_height)),
               tol);
    }
    print_line(out, 4, r, "end cycle sign pattern and end residues", tol);
    failures += !r.pass;
  }

  // 5. closing data shape (a, -a, conj b, b); a = mu, b = 0 on the base line
  {
    constexpr double tol = 1e-8;
    Line r;
    for (const auto& p : grid) {
      const auto rep = check_closing(p, tol);
      r.update(rep.max_residual, tol);
      r.require(rep.a > 0.0, "a > 0");
      if (p.alpha == 0.0 && p.beta == 0.0) {
        r.update(std::abs(rep.a - p.mu), tol);
        r.update(std::abs(rep.b), tol);
      }
    }
    print_line(out, 5, r, "closing data has the shape (a, -a, conj b, b)",
               tol);
    failures += !r.pass;
  }

  // 6. away from the base line the gamma2 flux leaves (0, 0, 2 pi)
  {
    constexpr double floor_ = 1e-3;
    Line r;
    double least = std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < grid.size(); ++t) {
      const auto& p = grid[t];
      if (std::max(std::abs(p.alpha), p.beta) < 0.1) continue;
      const Vec3 ref{0.0, 0.0, 2.0 * kPi};
      least = std::min(least, norm3(sub3(data[t].g2.F, ref)));
    }
    r.worst = least;
    r.require(least > floor_, "flux defect too small");
    print_line(out, 6, r, "gamma2 flux defect off the base line (min norm)",
               floor_);
    failures += !r.pass;
  }

  // 7. self-conjugacy of the family under (theta, alpha, beta) ->
  //    (pi/2 - theta, alpha, beta + pi/2)
  {
    constexpr double tol = 1e-6;
    Line r;
    for (const double theta : {0.5, kPi / 4.0, 1.1})
      for (const double alpha : {-0.7, 0.3, 0.9})
        for (const double beta : {0.25, 1.2, 2.2}) {
          const auto p = SurfaceParams::make(theta, alpha, beta);
          const auto rep = check_self_conjugate(p, tol);
          r.update(rep.max_mismatch, tol);
          r.require(rep.ok, "conjugation mismatch");
          if (theta == kPi / 4.0)
            r.require(rep.scale == 1.0, "self-conjugate scale");
        }
    print_line(out, 7, r, "conjugate surface invariants after scaling", tol);
    failures += !r.pass;
  }

  // 8. classifying map: nonsingular Jacobian and local round trip
  {
    constexpr double det_floor = 1e-6;
    constexpr double tol = 1e-6;
    constexpr double h = 1e-5;
    Line r;
    double least_det = std::numeric_limits<double>::infinity();
    int eligible = 0;
    for (const auto& p : grid) {
      const bool interior =
          p.beta >= 2.0 * h &&
          SurfaceParams::admissible(p.theta - 2.0 * h, p.alpha, p.beta) &&
          SurfaceParams::admissible(p.theta + 2.0 * h, p.alpha, p.beta) &&
          SurfaceParams::admissible(p.theta, p.alpha - 2.0 * h, p.beta) &&
          SurfaceParams::admissible(p.theta, p.alpha + 2.0 * h, p.beta) &&
          SurfaceParams::admissible(p.theta, p.alpha, p.beta - 2.0 * h) &&
          SurfaceParams::admissible(p.theta, p.alpha, p.beta + 2.0 * h) &&
          (std::abs(p.alpha) > 2.0 * h ||
           (std::abs(p.beta - p.theta) > 2.0 * h &&
            std::abs(p.beta - (kPi - p.theta)) > 2.0 * h));
      if (!interior) continue;
      ++eligible;
      Eigen::Matrix3d J = jacobian_C(p, h);
      for (int row = 0; row < 3; ++row) {
        const double n = J.row(row).norm();
        if (n > 0.0) J.row(row) /= n;
      }
      least_det = std::min(least_det, std::abs(J.determinant()));

      const ClassPoint q = classify(p);
      const InversionResult inv = invert_classify(q);
      const double err = std::max(
          {std::abs(inv.params.theta - p.theta),
           std::abs(inv.params.alpha - p.alpha),
           std::abs(inv.params.beta - p.beta)});
      r.update(err, tol);
    }
    r.require(eligible > 0, "no interior grid points");
    r.require(least_det > det_floor, "Jacobian near singular, |det| " +
                                         fmt(least_det));
    print_line(out, 8, r, "classifying map Jacobian and round trip", tol);
    failures += !r.pass;
  }

  // 9. boundary arc: exact midpoint value, rejection, and the small-theta
  //    approach to the singly periodic limit
  {
    constexpr double rel = 0.05;
    Line r;
    const ClassPoint mid = scherk_boundary(kPi / 2.0);
    r.require(mid.a == 2.0, "arc midpoint a");
    r.require(mid.b == Complex(0.0, 2.0 * kPi), "arc midpoint b");
    bool rejected = false;
    try {
      invert_classify(mid);
    } catch (const NumericalError&) {
      rejected = true;
    } catch (...) {
    }
    r.require(rejected, "arc target not rejected");

    const double a0 = 0.5, b0 = 0.5;
    const double target =
        2.0 / std::sin(std::acos(std::cos(a0) * std::cos(b0)));
    std::vector<double> dist;
    for (const double theta : {0.2, 0.1, 0.05, 0.02}) {
      const auto cp = classify(SurfaceParams::make(theta, a0, b0));
      dist.push_back(std::abs(cp.a - target));
    }
    r.require(dist.back() < dist.front(), "no approach to the limit");
    r.update(dist.back() / target, rel);
    print_line(out, 9, r, "Scherk boundary arc and the small-theta limit",
               rel);
    failures += !r.pass;
  }

  // 10. mesh integrity: conformality, seams, cycle displacement, exports
  {
    constexpr double tol_conf = 1e-10;
    constexpr double tol_seam = 1e-6;
    Line r;
    const auto p = SurfaceParams::make(0.8, 0.5, 0.7);
    const auto lat = period_lattice(p);

    MeshRequest req;
    req.params = p;
    req.resolution = 6;
    req.eps = 1e-3;
    req.copies = {2, 1};
    const Mesh m = build_mesh(req);
    const auto g = gauss_coeffs(p);

    double conf = 0.0;
    for (const auto& s : m.sites) {
      const auto fv = forms_at(p, g, s.zeta, s.w, s.u_chart);
      const Complex q = fv.phi[0] * fv.phi[0] + fv.phi[1] * fv.phi[1] +
                        fv.phi[2] * fv.phi[2];
      const double mag = std::norm(fv.phi[0]) + std::norm(fv.phi[1]) +
                         std::norm(fv.phi[2]);
      conf = std::max(conf, std::abs(q) / mag);
    }
    r.require(conf < tol_conf, "conformality " + fmt(conf));

    // seams: coincident torus points must differ by a lattice vector
    struct Key {
      Complex z, w;
      bool valid;
    };
    std::vector<Key> keys(m.sites.size());
    for (size_t k = 0; k < m.sites.size(); ++k) {
      const auto& s = m.sites[k];
      if (s.u_chart) {
        if (s.zeta == Complex(0.0, 0.0)) {
          keys[k] = {0.0, 0.0, false};
          continue;
        }
        const Complex z = 1.0 / s.zeta;
        keys[k] = {z, s.w * z * z, true};
      } else {
        keys[k] = {s.zeta, s.w, true};
      }
    }
    int pairs = 0;
    double worst_seam = 0.0;
    for (size_t i = 0; i < keys.size(); ++i) {
      if (!keys[i].valid) continue;
      for (size_t j = i + 1; j < keys.size(); ++j) {
        if (!keys[j].valid) continue;
        if (std::abs(keys[i].z - keys[j].z) >
            1e-9 * (1.0 + std::abs(keys[i].z)))
          continue;
        if (std::abs(keys[i].w - keys[j].w) >
            1e-6 * (1.0 + std::abs(keys[i].w)))
          continue;
        ++pairs;
        const Vec3 d = sub3(m.vertices[i], m.vertices[j]);
        double best = norm3(d);
        for (int mm = -2; mm <= 2; ++mm)
          for (int nn = -2; nn <= 2; ++nn)
            best = std::min(
                best, norm3(sub3(d, add3(scale3(mm, lat.PA),
                                         scale3(nn, lat.P1)))));
        worst_seam = std::max(worst_seam, best);
      }
    }
    r.require(pairs > 100, "too few seam samples");
    r.update(worst_seam, tol_seam);

    // closed-cycle displacement along the end cycle
    {
      const auto cyc = make_cycle(CycleName::GammaA, p);
      Vec3 tot{0.0, 0.0, 0.0};
      for (const auto& comp : cyc.components) {
        const TorusPoint start{comp.z_path.front(), comp.start_w,
                               comp.u_chart};
        tot = add3(tot, scale3(comp.coeff, immerse(p, start, comp.z_path)));
      }
      r.update(norm3(sub3(tot, lat.PA)), tol_seam);
    }

    // copy translation is exact
    {
      const int base_v = static_cast<int>(m.vertices.size()) / 2;
      bool exact = true;
      for (int k = 0; k < base_v; ++k) {
        const Vec3 e = add3(m.vertices[static_cast<size_t>(k)], lat.PA);
        const Vec3& got = m.vertices[static_cast<size_t>(base_v + k)];
        exact = exact && e[0] == got[0] && e[1] == got[1] && e[2] == got[2];
      }
      r.require(exact, "copy translation not exact");
    }

    // exports are byte-stable and parseable
    {
      const Mesh m2 = build_mesh(req);
      std::ostringstream a1, a2, b1, b2;
      export_mesh(m, MeshFormat::OBJ, a1);
      export_mesh(m2, MeshFormat::OBJ, a2);
      export_mesh(m, MeshFormat::PLY, b1);
      export_mesh(m2, MeshFormat::PLY, b2);
      r.require(a1.str() == a2.str() && b1.str() == b2.str(),
                "exports not byte-stable");
      size_t nv = 0, nn = 0, nf = 0;
      std::istringstream is(a1.str());
      std::string line;
      bool parse_ok = true;
      while (std::getline(is, line)) {
        if (line.rfind("v ", 0) == 0) ++nv;
        if (line.rfind("vn ", 0) == 0) ++nn;
        if (line.rfind("f ", 0) == 0) {
          ++nf;
          std::istringstream ls(line.substr(1));
          for (int c = 0; c < 3; ++c) {
            long idx = 0;
            std::string tok;
            ls >> tok;
            idx = std::strtol(tok.c_str(), nullptr, 10);
            parse_ok = parse_ok && idx >= 1 &&
                       idx <= static_cast<long>(m.vertices.size());
          }
        }
      }
      r.require(parse_ok && nv == m.vertices.size() &&
                    nn == m.normals.size() && nf == m.triangles.size(),
                "obj parse mismatch");
    }
    print_line(out, 10, r, "mesh conformality, seams, displacement, exports",
               tol_seam);
    failures += !r.pass;
  }

  out << (failures == 0 ? "all criteria passed"
                        : std::to_string(failures) + " criteria FAILED")
      << "\n";
  return failures;
}

}  // namespace kmr
