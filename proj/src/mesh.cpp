#include "kmr/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace kmr {

namespace {

const Complex kI(0.0, 1.0);

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

// s = (dh, dh/g, g dh) integrals; X = Re((s1-s2)/2, i(s1+s2)/2, s0)
Vec3 xmap(const CVec<3>& s) {
  const Complex phi1 = 0.5 * (s[1] - s[2]);
  const Complex phi2 = 0.5 * kI * (s[1] + s[2]);
  return {phi1.real(), phi2.real(), s[0].real()};
}

Complex rhs_chart(Complex zeta, double lambda, bool u_chart) {
  return u_chart ? curve_rhs_u(zeta, lambda) : curve_rhs(zeta, lambda);
}

Complex pick_branch(Complex w0, Complex hint) {
  return (std::abs(w0 - hint) <= std::abs(-w0 - hint)) ? w0 : -w0;
}

double segment_distance(Complex a, Complex b, Complex c) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(c - a);
  double t = (std::conj(ab) * (c - a)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(c - (a + t * ab));
}

// dodge disk radius around an end, scaled like the spherical metric
double dodge_radius(Complex c) { return 5e-5 * (1.0 + std::norm(c)); }

// end coordinates visible in one chart
std::vector<Complex> chart_punctures(const GaussMap& g, bool u_chart) {
  std::vector<Complex> out;
  const Complex z0 = gauss_zero(g);
  const Complex zi = gauss_pole(g);
  const bool zi_finite = std::isfinite(std::abs(zi));
  if (!u_chart) {
    out.push_back(z0);
    if (zi_finite) out.push_back(zi);
  } else {
    if (z0 != Complex(0.0, 0.0)) out.push_back(1.0 / z0);
    if (!zi_finite)
      out.push_back(Complex(0.0, 0.0));
    else if (zi != Complex(0.0, 0.0))
      out.push_back(1.0 / zi);
  }
  return out;
}

// Replaces every stretch that passes inside the dodge disk of an end by a
// counterclockwise arc around it. Path nodes themselves must stay outside
// the disks.
std::vector<Complex> dodge_punctures(std::vector<Complex> path,
                                     const std::vector<Complex>& punct) {
  for (const Complex c : punct) {
    const double d = dodge_radius(c);
    std::vector<Complex> out;
    out.reserve(path.size());
    out.push_back(path.front());
    for (size_t k = 0; k + 1 < path.size(); ++k) {
      const Complex a = path[k], b = path[k + 1];
      if (segment_distance(a, b, c) >= d) {
        out.push_back(b);
        continue;
      }
      if (std::abs(a - c) < d || std::abs(b - c) < d)
        throw NumericalError("path node inside an end dodge disk",
                             std::min(std::abs(a - c), std::abs(b - c)));
      const Complex ab = b - a;
      const double len2 = std::norm(ab);
      const double t = (std::conj(ab) * (c - a)).real() / len2;
      const double h = std::abs(c - (a + t * ab));
      const double dt = std::sqrt(std::max(d * d - h * h, 0.0) / len2);
      const double t1 = std::clamp(t - dt, 0.0, 1.0);
      const double t2 = std::clamp(t + dt, 0.0, 1.0);
      const Complex e1 = a + t1 * ab, e2 = a + t2 * ab;
      double th1 = std::arg(e1 - c), th2 = std::arg(e2 - c);
      while (th2 < th1) th2 += 2.0 * M_PI;
      out.push_back(e1);
      const int m = 16;
      for (int s = 1; s < m; ++s)
        out.push_back(c + std::polar(d, th1 + (th2 - th1) * s / m));
      out.push_back(e2);
      out.push_back(b);
    }
    path = std::move(out);
  }
  return path;
}

struct FlowState {
  TorusPoint at;
  Vec3 X{0.0, 0.0, 0.0};
};

// advance the state along a polyline in its chart, dodging the ends
void flow(FlowState& s, std::vector<Complex> path, const SurfaceParams& p,
          const GaussMap& g, const std::vector<Complex>& punct,
          const QuadratureSettings& qs) {
  path = dodge_punctures(std::move(path), punct);
  const LiftedPath lift = s.at.at_infinity
                              ? continue_along_u(path, s.at.w, p)
                              : continue_along(path, s.at, p);
  const Vec3 dX = xmap(forms_along(lift, p, g, qs));
  s.at = TorusPoint{lift.z.back(), lift.w.back(), s.at.at_infinity};
  s.X = add3(s.X, dX);
}

TorusPoint zpt_to_u(const TorusPoint& zp) {
  const Complex u = 1.0 / zp.z;
  return {u, zp.w * u * u, true};
}

struct BandSpec {
  bool u_chart = false;
  bool disk = false;
  double r_lo = 0.0;
  double r_hi = 0.0;
};

// two bands per chart, separated by a ring gap at the branch-point radius
std::array<BandSpec, 4> band_specs(const SurfaceParams& p) {
  const double gap = 0.05 * p.branch_gap();
  const double r_branch = 1.0 / p.lambda;
  return {{{false, true, 0.0, r_branch - gap},
           {false, false, r_branch + gap, 1.0},
           {true, false, r_branch + gap, 1.0},
           {true, true, 0.0, r_branch - gap}}};
}

Complex node_zeta(const BandSpec& b, int quadrant, int N, int i, int j) {
  double rho;
  if (b.disk)
    rho = b.r_hi * (static_cast<double>(i) / N);
  else
    rho = (i == N) ? b.r_hi
                   : b.r_lo + (b.r_hi - b.r_lo) * (static_cast<double>(i) / N);
  const double phi = 0.5 * M_PI * (quadrant + static_cast<double>(j) / N);
  return std::polar(rho, b.u_chart ? -phi : phi);
}

struct Raster {
  bool disk = false;
  int N = 0;
  int idx(int i, int j) const {
    return disk ? (i == 0 ? 0 : 1 + (i - 1) * (N + 1) + j) : i * (N + 1) + j;
  }
  int count() const { return disk ? 1 + N * (N + 1) : (N + 1) * (N + 1); }
  int i_min() const { return disk ? 1 : 0; }
};

std::pair<int, int> pick_anchor(const BandSpec& b, int quadrant, int N,
                                const std::vector<Complex>& punct) {
  const int ilo = b.disk ? 1 : 0;
  const int i0 = std::max(ilo, N / 2);
  const int j0 = std::clamp(N / 2, 1, N - 1);
  auto clear = [&](int i, int j) {
    const Complex zeta = node_zeta(b, quadrant, N, i, j);
    for (const Complex c : punct)
      if (std::abs(zeta - c) < 2.0 * dodge_radius(c)) return false;
    return true;
  };
  const std::array<std::pair<int, int>, 9> offs = {
      {{0, 0}, {0, -1}, {0, 1}, {-1, 0}, {1, 0}, {-1, -1}, {1, 1}, {-1, 1},
       {1, -1}}};
  for (const auto& [di, dj] : offs) {
    const int i = std::clamp(i0 + di, ilo, N);
    const int j = std::clamp(j0 + dj, 1, N - 1);
    if (clear(i, j)) return {i, j};
  }
  throw NumericalError("no anchor node clear of the ends", 0.0);
}

struct NodeData {
  Complex zeta;
  FlowState state;  // sits at zeta only when !skip
  CVec<3> phi{};    // dzeta coefficients of Phi
  Complex gval{};
  double absg = 0.0;
  bool skip = false;  // inside an end dodge disk; never emitted
  bool have_phi = false;
};

struct PatchData {
  Raster ras;
  std::vector<NodeData> nodes;
  std::vector<char> arc_torn;    // edge (i,j)-(i,j+1) at index i*N + j
  std::vector<char> spoke_torn;  // disks: edge center-(1,j) at index j
};

PatchData propagate_patch(const SurfaceParams& p, const GaussMap& g,
                          const QuadratureSettings& qs, const BandSpec& b,
                          int quadrant, int N, const FlowState& anchor_z,
                          std::pair<int, int> aij,
                          const std::vector<Complex>& punct, double tear_tol) {
  PatchData P;
  P.ras = {b.disk, N};
  P.nodes.assign(static_cast<size_t>(P.ras.count()), {});
  auto node_at = [&](int i, int j) -> NodeData& {
    return P.nodes[static_cast<size_t>(P.ras.idx(i, j))];
  };
  for (int i = P.ras.i_min(); i <= N; ++i)
    for (int j = 0; j <= N; ++j)
      node_at(i, j).zeta = node_zeta(b, quadrant, N, i, j);
  if (b.disk) P.nodes[0].zeta = Complex(0.0, 0.0);

  FlowState a = anchor_z;
  if (b.u_chart) a.at = zpt_to_u(a.at);
  const auto [ia, ja] = aij;

  auto step_to = [&](const FlowState& from, int i, int j) {
    NodeData& nd = node_at(i, j);
    for (const Complex c : punct) {
      if (std::abs(nd.zeta - c) < dodge_radius(c)) {
        nd.state = from;  // placeholder, never emitted
        nd.skip = true;
        return;
      }
    }
    FlowState s = from;
    flow(s, {from.at.z, nd.zeta}, p, g, punct, qs);
    nd.state = s;
  };

  node_at(ia, ja).state = a;
  for (int j = ja + 1; j <= N; ++j) step_to(node_at(ia, j - 1).state, ia, j);
  for (int j = ja - 1; j >= 0; --j) step_to(node_at(ia, j + 1).state, ia, j);
  const int imin = P.ras.i_min();
  for (int j = 0; j <= N; ++j) {
    for (int i = ia + 1; i <= N; ++i) step_to(node_at(i - 1, j).state, i, j);
    for (int i = ia - 1; i >= imin; --i) step_to(node_at(i + 1, j).state, i, j);
  }
  if (b.disk) step_to(node_at(1, ja).state, 0, 0);

  for (auto& nd : P.nodes) {
    nd.gval = gauss_value(g, TorusPoint{nd.zeta, nd.state.at.w, b.u_chart});
    nd.absg = std::abs(nd.gval);
    if (!nd.skip) {
      nd.phi = forms_at(p, g, nd.zeta, nd.state.at.w, b.u_chart).phi;
      nd.have_phi = true;
    }
  }

  // A raster edge whose endpoint values disagree with the direct chord
  // integral by a lattice-scale jump straddles an end; the cells on it are
  // dropped.
  auto edge_torn = [&](const NodeData& A, const NodeData& B) -> bool {
    if (A.skip || B.skip) return true;
    const Complex dz = B.zeta - A.zeta;
    const Complex zm = 0.5 * (A.zeta + B.zeta);
    const Complex wm = pick_branch(
        std::sqrt(rhs_chart(zm, p.lambda, b.u_chart)),
        0.5 * (A.state.at.w + B.state.at.w));
    const CVec<3> phim = forms_at(p, g, zm, wm, b.u_chart).phi;
    Vec3 est;
    for (int k = 0; k < 3; ++k)
      est[k] = ((A.phi[k] + 4.0 * phim[k] + B.phi[k]) * (dz / 6.0)).real();
    return norm3(sub3(sub3(B.state.X, A.state.X), est)) > tear_tol;
  };

  P.arc_torn.assign(static_cast<size_t>((N + 1) * N), 0);
  for (int i = P.ras.i_min(); i <= N; ++i)
    for (int j = 0; j < N; ++j)
      P.arc_torn[static_cast<size_t>(i * N + j)] =
          edge_torn(node_at(i, j), node_at(i, j + 1)) ? 1 : 0;
  if (b.disk) {
    P.spoke_torn.assign(static_cast<size_t>(N + 1), 0);
    for (int j = 0; j <= N; ++j)
      P.spoke_torn[static_cast<size_t>(j)] =
          edge_torn(P.nodes[0], node_at(1, j)) ? 1 : 0;
  }
  return P;
}

std::string short_name(int sheet, int q, int band) {
  return "sheet" + std::to_string(sheet) + "/q" + std::to_string(q) + "/band" +
         std::to_string(band);
}

std::string patch_name(int cm, int cn, int sheet, int q, int band) {
  return "copy" + std::to_string(cm) + "," + std::to_string(cn) + "/" +
         short_name(sheet, q, band);
}

void emit_patch(Mesh& m, const PatchData& P, const BandSpec& b, int sheet,
                int quadrant, int band, double eps) {
  PatchInfo info;
  info.sheet = sheet;
  info.quadrant = quadrant;
  info.band = band;
  info.copy = {0, 0};
  info.name = patch_name(0, 0, sheet, quadrant, band);
  info.first_vertex = static_cast<int>(m.vertices.size());
  info.first_triangle = static_cast<int>(m.triangles.size());
  const int patch_index = static_cast<int>(m.patches.size());

  const Raster& R = P.ras;
  const int N = R.N;
  std::vector<int> vid(P.nodes.size(), -1);
  for (size_t k = 0; k < P.nodes.size(); ++k) {
    const NodeData& nd = P.nodes[k];
    if (nd.skip) continue;
    if (!(std::isfinite(nd.absg) && nd.absg >= eps && nd.absg <= 1.0 / eps))
      continue;
    const Vec3& X = nd.state.X;
    if (!std::isfinite(X[0]) || !std::isfinite(X[1]) || !std::isfinite(X[2]))
      throw NumericalError(
          "non-finite vertex in patch " + short_name(sheet, quadrant, band),
          0.0);
    vid[k] = static_cast<int>(m.vertices.size());
    m.vertices.push_back(X);
    const double n2 = std::norm(nd.gval);
    m.normals.push_back({2.0 * nd.gval.real() / (n2 + 1.0),
                         2.0 * nd.gval.imag() / (n2 + 1.0),
                         (n2 - 1.0) / (n2 + 1.0)});
    m.vertex_patch.push_back(patch_index);
    m.sites.push_back({nd.zeta, nd.state.at.w, b.u_chart});
  }

  auto tri = [&](int va, int vb, int vc) {
    if (va < 0 || vb < 0 || vc < 0) return;
    if (b.u_chart) std::swap(vb, vc);  // u-raster runs clockwise in its chart
    m.triangles.push_back({va, vb, vc});
  };
  for (int i = R.i_min(); i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (P.arc_torn[static_cast<size_t>(i * N + j)] ||
          P.arc_torn[static_cast<size_t>((i + 1) * N + j)])
        continue;
      tri(vid[static_cast<size_t>(R.idx(i, j))],
          vid[static_cast<size_t>(R.idx(i + 1, j))],
          vid[static_cast<size_t>(R.idx(i + 1, j + 1))]);
      tri(vid[static_cast<size_t>(R.idx(i, j))],
          vid[static_cast<size_t>(R.idx(i + 1, j + 1))],
          vid[static_cast<size_t>(R.idx(i, j + 1))]);
    }
  if (R.disk) {
    for (int j = 0; j < N; ++j) {
      if (P.spoke_torn[static_cast<size_t>(j)] ||
          P.spoke_torn[static_cast<size_t>(j + 1)] ||
          P.arc_torn[static_cast<size_t>(1 * N + j)])
        continue;
      tri(vid[0], vid[static_cast<size_t>(R.idx(1, j))],
          vid[static_cast<size_t>(R.idx(1, j + 1))]);
    }
  }

  info.vertex_count = static_cast<int>(m.vertices.size()) - info.first_vertex;
  info.triangle_count =
      static_cast<int>(m.triangles.size()) - info.first_triangle;
  m.patches.push_back(info);
}

}  // namespace

std::array<double, 3> immerse(const SurfaceParams& p, const TorusPoint& start,
                              const std::vector<Complex>& path,
                              TorusPoint* end_point) {
  if (path.empty()) throw DomainError("immersion path needs at least one node");
  if (std::abs(path.front() - start.z) > 1e-12 * (1.0 + std::abs(start.z)))
    throw DomainError("immersion path must start at the start point");
  const GaussMap g = gauss_coeffs(p);
  const auto punct = chart_punctures(g, start.at_infinity);
  for (size_t k = 0; k + 1 < path.size(); ++k)
    for (const Complex c : punct)
      if (segment_distance(path[k], path[k + 1], c) <
          1e-9 * (1.0 + std::norm(c)))
        throw NumericalError(
            "the immersion integral diverges: the path runs into an end", 0.0);
  if (path.size() < 2) {
    if (end_point) *end_point = start;
    return {0.0, 0.0, 0.0};
  }
  const LiftedPath lift = start.at_infinity
                              ? continue_along_u(path, start.w, p)
                              : continue_along(path, start, p);
  const CVec<3> s = forms_along(lift, p, g);
  if (end_point)
    *end_point = TorusPoint{lift.z.back(), lift.w.back(), start.at_infinity};
  return xmap(s);
}

Mesh build_mesh(const MeshRequest& req) {
  const SurfaceParams& p = req.params;
  {
    std::string why;
    if (!(p.lambda > 1.0) ||
        !SurfaceParams::admissible(p.theta, p.alpha, p.beta, &why))
      throw DomainError("mesh request parameters: " +
                        (why.empty() ? std::string("uninitialized") : why));
  }
  if (req.resolution < 2)
    throw DomainError("mesh resolution must be at least 2");
  if (!(req.eps > 0.0 && req.eps < 1.0))
    throw DomainError("mesh end truncation must lie in (0, 1)");
  if (req.copies[0] < 1 || req.copies[1] < 1)
    throw DomainError("mesh copy counts must be at least 1");

  const int N = req.resolution;
  const GaussMap g = gauss_coeffs(p);
  const QuadratureSettings qs{};
  const auto bands = band_specs(p);
  const auto punct_z = chart_punctures(g, false);
  const auto punct_u = chart_punctures(g, true);

  const PeriodLattice lat = period_lattice(p);
  double lmin = std::numeric_limits<double>::infinity();
  for (int mm = -1; mm <= 1; ++mm)
    for (int nn = -1; nn <= 1; ++nn) {
      if (mm == 0 && nn == 0) continue;
      lmin = std::min(
          lmin, norm3(add3(scale3(mm, lat.PA), scale3(nn, lat.P1))));
    }
  const double tear_tol = 0.45 * lmin;

  // base point on the unit circle, rotated off z = 1 when an end sits there
  double phi_b = 0.0;
  for (const Complex c : punct_z)
    if (std::abs(c - Complex(1.0, 0.0)) < 0.05) phi_b = -0.35;
  const Complex zb = std::polar(1.0, phi_b);
  const Complex wb = std::sqrt(curve_rhs(zb, p.lambda));
  const FlowState base1{TorusPoint::finite(zb, wb), {0.0, 0.0, 0.0}};

  // sheet 2 entry: a rectangle around the branch point at i*lambda flips w
  FlowState base2 = base1;
  {
    const double L = p.lambda;
    const double Y = std::min(0.3 * (L - 1.0 / L), 1.0);
    const double Xr = 0.35;
    const std::vector<Complex> loop = {
        zb,           Complex(Xr, L - Y),  Complex(Xr, L + Y),
        Complex(-Xr, L + Y), Complex(-Xr, L - Y), Complex(Xr, L - Y),
        zb};
    try {
      flow(base2, loop, p, g, punct_z, qs);
    } catch (const std::exception& e) {
      throw NumericalError(std::string("sheet flip loop failed: ") + e.what(),
                           0.0);
    }
    if (std::abs(base2.at.w + wb) > 1e-6 * (1.0 + std::abs(wb)))
      throw NumericalError("sheet flip loop did not change the lift",
                           std::abs(base2.at.w + wb));
  }

  Mesh mesh;
  for (int sheet = 1; sheet <= 2; ++sheet) {
    const FlowState& entry = (sheet == 1) ? base1 : base2;

    std::pair<int, int> aij[4][4];
    for (int q = 0; q < 4; ++q)
      for (int band = 0; band < 4; ++band)
        aij[q][band] = pick_anchor(bands[static_cast<size_t>(band)], q, N,
                                   bands[static_cast<size_t>(band)].u_chart
                                       ? punct_u
                                       : punct_z);
    auto anchor_pos_z = [&](int q, int band) {
      const BandSpec& bs = bands[static_cast<size_t>(band)];
      const auto [i, j] = aij[q][band];
      const Complex zeta = node_zeta(bs, q, N, i, j);
      return bs.u_chart ? 1.0 / zeta : zeta;
    };
    auto tree_step = [&](const FlowState& from, int q, int band) {
      FlowState s = from;
      try {
        flow(s, {from.at.z, anchor_pos_z(q, band)}, p, g, punct_z, qs);
      } catch (const std::exception& e) {
        throw NumericalError("mesh integration failed for patch " +
                                 short_name(sheet, q, band) + ": " + e.what(),
                             0.0);
      }
      return s;
    };

    // spanning tree: down/up the radial chain of quadrant 0, around through
    // the inner disk band (its imaginary-axis crossings sit below the cut)
    FlowState anchors[4][4];
    anchors[0][1] = tree_step(entry, 0, 1);
    anchors[0][0] = tree_step(anchors[0][1], 0, 0);
    anchors[0][2] = tree_step(anchors[0][1], 0, 2);
    anchors[0][3] = tree_step(anchors[0][2], 0, 3);
    anchors[1][0] = tree_step(anchors[0][0], 1, 0);
    anchors[2][0] = tree_step(anchors[1][0], 2, 0);
    anchors[3][0] = tree_step(anchors[0][0], 3, 0);
    for (int q = 1; q < 4; ++q) {
      anchors[q][1] = tree_step(anchors[q][0], q, 1);
      anchors[q][2] = tree_step(anchors[q][1], q, 2);
      anchors[q][3] = tree_step(anchors[q][2], q, 3);
    }

    for (int q = 0; q < 4; ++q)
      for (int band = 0; band < 4; ++band) {
        const BandSpec& bs = bands[static_cast<size_t>(band)];
        try {
          const PatchData P = propagate_patch(
              p, g, qs, bs, q, N, anchors[q][band], aij[q][band],
              bs.u_chart ? punct_u : punct_z, tear_tol);
          emit_patch(mesh, P, bs, sheet, q, band, req.eps);
        } catch (const NumericalError&) {
          throw;
        } catch (const std::exception& e) {
          throw NumericalError("mesh integration failed for patch " +
                                   short_name(sheet, q, band) + ": " +
                                   e.what(),
                               0.0);
        }
      }
  }

  // lattice copies of the base complex
  const int base_v = static_cast<int>(mesh.vertices.size());
  const int base_t = static_cast<int>(mesh.triangles.size());
  const int base_p = static_cast<int>(mesh.patches.size());
  int ordinal = 0;
  for (int cm = 0; cm < req.copies[0]; ++cm)
    for (int cn = 0; cn < req.copies[1]; ++cn) {
      if (cm == 0 && cn == 0) continue;
      ++ordinal;
      const Vec3 offset =
          add3(scale3(cm, lat.PA), scale3(cn, lat.P1));
      const int voff = ordinal * base_v;
      const int poff = ordinal * base_p;
      for (int k = 0; k < base_v; ++k) {
        mesh.vertices.push_back(add3(mesh.vertices[static_cast<size_t>(k)],
                                     offset));
        mesh.normals.push_back(mesh.normals[static_cast<size_t>(k)]);
        mesh.vertex_patch.push_back(
            mesh.vertex_patch[static_cast<size_t>(k)] + poff);
        mesh.sites.push_back(mesh.sites[static_cast<size_t>(k)]);
      }
      for (int k = 0; k < base_t; ++k) {
        auto t = mesh.triangles[static_cast<size_t>(k)];
        for (auto& v : t) v += voff;
        mesh.triangles.push_back(t);
      }
      for (int k = 0; k < base_p; ++k) {
        PatchInfo pi = mesh.patches[static_cast<size_t>(k)];
        pi.copy = {cm, cn};
        pi.name = patch_name(cm, cn, pi.sheet, pi.quadrant, pi.band);
        pi.first_vertex += voff;
        pi.first_triangle += ordinal * base_t;
        mesh.patches.push_back(pi);
      }
    }
  return mesh;
}

namespace {

void append_double(std::string& buf, double x) {
  char tmp[64];
  const auto res = std::to_chars(tmp, tmp + sizeof(tmp), x);
  buf.append(tmp, res.ptr);
}

}  // namespace

void export_mesh(const Mesh& m, MeshFormat f, std::ostream& out) {
  std::string buf;
  buf.reserve(70 * m.vertices.size() + 24 * m.triangles.size() + 512);
  if (f == MeshFormat::OBJ) {
    buf += "# minimal surface mesh\n# ";
    buf += std::to_string(m.vertices.size());
    buf += " vertices, ";
    buf += std::to_string(m.triangles.size());
    buf += " faces\n";
    for (const auto& v : m.vertices) {
      buf += "v ";
      append_double(buf, v[0]);
      buf += ' ';
      append_double(buf, v[1]);
      buf += ' ';
      append_double(buf, v[2]);
      buf += '\n';
    }
    for (const auto& n : m.normals) {
      buf += "vn ";
      append_double(buf, n[0]);
      buf += ' ';
      append_double(buf, n[1]);
      buf += ' ';
      append_double(buf, n[2]);
      buf += '\n';
    }
    for (const auto& t : m.triangles) {
      buf += "f";
      for (int c = 0; c < 3; ++c) {
        const std::string k = std::to_string(t[static_cast<size_t>(c)] + 1);
        buf += ' ';
        buf += k;
        buf += "//";
        buf += k;
      }
      buf += '\n';
    }
  } else {
    buf += "ply\nformat ascii 1.0\ncomment minimal surface mesh\n";
    buf += "element vertex ";
    buf += std::to_string(m.vertices.size());
    buf +=
        "\nproperty double x\nproperty double y\nproperty double z\n"
        "property double nx\nproperty double ny\nproperty double nz\n";
    buf += "element face ";
    buf += std::to_string(m.triangles.size());
    buf += "\nproperty list uchar int vertex_indices\nend_header\n";
    for (size_t k = 0; k < m.vertices.size(); ++k) {
      append_double(buf, m.vertices[k][0]);
      buf += ' ';
      append_double(buf, m.vertices[k][1]);
      buf += ' ';
      append_double(buf, m.vertices[k][2]);
      buf += ' ';
      append_double(buf, m.normals[k][0]);
      buf += ' ';
      append_double(buf, m.normals[k][1]);
      buf += ' ';
      append_double(buf, m.normals[k][2]);
      buf += '\n';
    }
    for (const auto& t : m.triangles) {
      buf += "3 ";
      buf += std::to_string(t[0]);
      buf += ' ';
      buf += std::to_string(t[1]);
      buf += ' ';
      buf += std::to_string(t[2]);
      buf += '\n';
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void export_mesh(const Mesh& m, MeshFormat f, const std::string& path) {
  std::ofstream ofs(path, std::ios::binary);
  if (!ofs) throw DomainError("cannot open " + path + " for writing");
  export_mesh(m, f, ofs);
  ofs.flush();
  if (!ofs) throw DomainError("failed writing mesh to " + path);
}

}  // namespace kmr
