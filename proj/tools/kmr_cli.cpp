#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "kmr/acceptance.hpp"
#include "kmr/cycles.hpp"
#include "kmr/errors.hpp"
#include "kmr/invariants.hpp"
#include "kmr/mesh.hpp"
#include "kmr/moduli.hpp"
#include "kmr/special.hpp"
#include "kmr/surface.hpp"
#include "kmr/weierstrass.hpp"

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// flat JSON object with snake_case keys, floats at 17 significant digits
class Json {
 public:
  Json& field(const std::string& k, double v) { return raw(k, num(v)); }
  Json& field(const std::string& k, int v) { return raw(k, std::to_string(v)); }
  Json& field(const std::string& k, bool v) { return raw(k, v ? "true" : "false"); }
  Json& field(const std::string& k, const std::string& v) { return raw(k, quote(v)); }
  Json& field(const std::string& k, const char* v) { return raw(k, quote(v)); }
  Json& field(const std::string& k, kmr::Complex v) {
    return raw(k, "[" + num(v.real()) + ", " + num(v.imag()) + "]");
  }
  Json& field(const std::string& k, const std::array<double, 3>& v) {
    return raw(k, "[" + num(v[0]) + ", " + num(v[1]) + ", " + num(v[2]) + "]");
  }
  Json& field(const std::string& k, const std::array<double, 4>& v) {
    return raw(k, "[" + num(v[0]) + ", " + num(v[1]) + ", " + num(v[2]) + ", " +
                      num(v[3]) + "]");
  }
  Json& field(const std::string& k, const std::vector<std::string>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += quote(v[i]);
    }
    return raw(k, s + "]");
  }
  std::string str() const { return "{" + body_ + "}"; }

 private:
  Json& raw(const std::string& k, const std::string& v) {
    if (!body_.empty()) body_ += ", ";
    body_ += quote(k) + ": " + v;
    return *this;
  }
  std::string body_;
};

void emit_error(const char* kind, const std::string& message) {
  Json j;
  j.field("error", kind).field("message", message);
  std::cerr << j.str() << "\n";
}

void add_end(Json& j, const std::string& key, const kmr::End& e) {
  j.field(key + "_chart", e.point.at_infinity ? "u" : "z");
  j.field(key + "_coord", e.point.z);
  j.field(key + "_is_pole", e.is_pole);
}

void run_info(const kmr::SurfaceParams& p) {
  Json j;
  j.field("theta", p.theta)
      .field("alpha", p.alpha)
      .field("beta", p.beta)
      .field("lambda", p.lambda)
      .field("mu", p.mu)
      .field("f1", kmr::f1_of_theta(p.theta))
      .field("e_factor", kmr::E_factor(p.theta, p.alpha, p.beta));
  const kmr::EndSet es = kmr::ends(p);
  add_end(j, "end_a", es.A);
  add_end(j, "end_a_prime", es.Ap);
  add_end(j, "end_a_double_prime", es.App);
  add_end(j, "end_a_triple_prime", es.Appp);
  const kmr::PeriodFlux pa = kmr::end_period_flux_closed_form(p);
  j.field("gamma_a_period", pa.P).field("gamma_a_flux", pa.F);
  const kmr::IsometryGroup iso = kmr::isometry_group(p);
  j.field("isometry_order", iso.order)
      .field("isometry_generators", iso.generator_labels);
  std::cout << j.str() << "\n";
}

void run_periods(const kmr::SurfaceParams& p) {
  using kmr::CycleName;
  const std::pair<CycleName, const char*> cycles[] = {
      {CycleName::GammaA, "gamma_a"},
      {CycleName::GammaAPrime, "gamma_a_prime"},
      {CycleName::GammaADoublePrime, "gamma_a_double_prime"},
      {CycleName::GammaATriplePrime, "gamma_a_triple_prime"},
      {CycleName::Gamma1, "gamma1"},
      {CycleName::Gamma2, "gamma2"},
  };
  Json j;
  j.field("theta", p.theta).field("alpha", p.alpha).field("beta", p.beta);
  for (const auto& [name, key] : cycles) {
    const kmr::PeriodFlux pf = kmr::period_flux(kmr::make_cycle(name, p), p);
    j.field(std::string(key) + "_period", pf.P);
    j.field(std::string(key) + "_flux", pf.F);
  }
  const kmr::ClosingReport rep = kmr::check_closing(p);
  j.field("closing_a", rep.a)
      .field("closing_b", rep.b)
      .field("closing_residuals", rep.residuals)
      .field("closing_max_residual", rep.max_residual)
      .field("closing_ok", rep.ok);
  std::cout << j.str() << "\n";
}

void run_classify(const kmr::SurfaceParams& p) {
  const kmr::ClassPoint c = kmr::classify(p);
  Json j;
  j.field("a", c.a).field("b", c.b).field("scherk_distance",
                                          kmr::scherk_arc_distance(c));
  std::cout << j.str() << "\n";
}

void run_invert(double a, double re_b, double im_b) {
  const kmr::InversionResult r =
      kmr::invert_classify({a, kmr::Complex(re_b, im_b)});
  Json j;
  j.field("theta", r.params.theta)
      .field("alpha", r.params.alpha)
      .field("beta", r.params.beta)
      .field("iterations", r.iterations)
      .field("residual", r.residual);
  std::cout << j.str() << "\n";
}

void run_conjugate(const kmr::SurfaceParams& p) {
  const kmr::ConjugationReport r = kmr::check_self_conjugate(p);
  Json j;
  j.field("source_theta", r.source.theta)
      .field("source_alpha", r.source.alpha)
      .field("source_beta", r.source.beta)
      .field("target_theta", r.target.theta)
      .field("target_alpha", r.target.alpha)
      .field("target_beta", r.target.beta)
      .field("scale", r.scale)
      .field("mismatches", r.mismatches)
      .field("max_mismatch", r.max_mismatch)
      .field("ok", r.ok);
  std::cout << j.str() << "\n";
}

void run_limits() {
  const double pi = M_PI;
  const std::array<double, 3> strata[] = {
      {0.0, 0.0, 0.0},       {0.0, 0.3, 0.4},      {0.0, pi / 2.0, 0.0},
      {pi / 2.0, 0.0, pi / 2.0}, {pi / 2.0, 0.3, 0.2}, {pi / 2.0, 0.0, 0.0},
      {0.7, 0.0, 0.7},       {0.7, 0.0, pi - 0.7}, {0.7, 0.3, 0.2},
  };
  std::string out = "[";
  bool first = true;
  for (const auto& s : strata) {
    const kmr::LimitClass lc = kmr::limit_classify(s[0], s[1], s[2]);
    Json j;
    j.field("theta", lc.theta)
        .field("alpha", lc.alpha)
        .field("beta", lc.beta)
        .field("kind", kmr::to_string(lc.kind))
        .field("angle", lc.angle);
    if (!first) out += ", ";
    first = false;
    out += j.str();
  }
  std::cout << out << "]\n";
}

void run_mesh(const kmr::SurfaceParams& p, int resolution, double eps,
              const std::vector<int>& copies, const std::string& format,
              const std::string& path) {
  kmr::MeshRequest req;
  req.params = p;
  req.resolution = resolution;
  req.eps = eps;
  req.copies = {copies[0], copies[1]};
  const kmr::Mesh m = kmr::build_mesh(req);
  const kmr::MeshFormat f =
      format == "ply" ? kmr::MeshFormat::PLY : kmr::MeshFormat::OBJ;
  kmr::export_mesh(m, f, path);
  Json j;
  j.field("theta", p.theta)
      .field("alpha", p.alpha)
      .field("beta", p.beta)
      .field("resolution", resolution)
      .field("eps", eps)
      .field("copies_a", copies[0])
      .field("copies_1", copies[1])
      .field("vertices", (int)m.vertices.size())
      .field("triangles", (int)m.triangles.size())
      .field("patches", (int)m.patches.size())
      .field("format", format)
      .field("file", path);
  std::cout << j.str() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doubly periodic minimal torus toolkit"};
  app.require_subcommand(1);

  double th = 0.0, al = 0.0, be = 0.0;
  const auto add_params = [&](CLI::App* sub) {
    sub->add_option("theta", th, "cone angle parameter")->required();
    sub->add_option("alpha", al, "end direction parameter")->required();
    sub->add_option("beta", be, "end position parameter")->required();
  };

  CLI::App* info = app.add_subcommand(
      "info", "surface data and closed-form invariants");
  add_params(info);

  CLI::App* periods = app.add_subcommand(
      "periods", "numeric periods and fluxes of the six cycles");
  add_params(periods);

  CLI::App* classify = app.add_subcommand(
      "classify", "classifying map value (a, b)");
  add_params(classify);

  double inv_a = 0.0, inv_rb = 0.0, inv_ib = 0.0;
  CLI::App* invert = app.add_subcommand(
      "invert", "parameters whose classifying value is (a, b)");
  invert->add_option("a", inv_a, "target a")->required();
  invert->add_option("re_b", inv_rb, "target Re(b)")->required();
  invert->add_option("im_b", inv_ib, "target Im(b)")->required();

  CLI::App* conjugate = app.add_subcommand(
      "conjugate", "self-conjugation check after parameter swap and scaling");
  add_params(conjugate);

  CLI::App* limits = app.add_subcommand(
      "limits", "limit taxonomy over representative boundary strata");

  CLI::App* mesh = app.add_subcommand("mesh", "triangulate and export");
  add_params(mesh);
  int resolution = 16;
  double eps = 0.05;
  std::vector<int> copies{2, 2};
  std::string format = "obj";
  std::string outfile;
  mesh->add_option("--resolution", resolution, "raster density per patch");
  mesh->add_option("--eps", eps, "clip where |g| leaves [eps, 1/eps]");
  mesh->add_option("--copies", copies, "lattice translate counts")
      ->expected(2);
  mesh->add_option("--format", format, "obj or ply")
      ->check(CLI::IsMember({"obj", "ply"}));
  mesh->add_option("-o,--output", outfile, "output file")->required();

  CLI::App* verify = app.add_subcommand(
      "verify", "run the acceptance battery, exit 0 iff all criteria pass");
  int grid_n = 5;
  verify->add_option("--grid", grid_n, "grid points per parameter axis")
      ->check(CLI::Range(2, 9));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    return 1;
  }

  try {
    if (app.got_subcommand(info)) {
      run_info(kmr::SurfaceParams::make(th, al, be));
    } else if (app.got_subcommand(periods)) {
      run_periods(kmr::SurfaceParams::make(th, al, be));
    } else if (app.got_subcommand(classify)) {
      run_classify(kmr::SurfaceParams::make(th, al, be));
    } else if (app.got_subcommand(invert)) {
      run_invert(inv_a, inv_rb, inv_ib);
    } else if (app.got_subcommand(conjugate)) {
      run_conjugate(kmr::SurfaceParams::make(th, al, be));
    } else if (app.got_subcommand(limits)) {
      run_limits();
    } else if (app.got_subcommand(mesh)) {
      run_mesh(kmr::SurfaceParams::make(th, al, be), resolution, eps, copies,
               format, outfile);
    } else if (app.got_subcommand(verify)) {
      return kmr::run_acceptance(grid_n, std::cout) == 0 ? 0 : 2;
    }
  } catch (const kmr::DomainError& e) {
    emit_error("domain", e.what());
    return 1;
  } catch (const kmr::NumericalError& e) {
    emit_error("numerical", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 2;
  }
  return 0;
}
