#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hrnvo/codebooks.hpp"
#include "hrnvo/evaluation.hpp"
#include "hrnvo/frame_transform.hpp"
#include "hrnvo/phasor.hpp"
#include "hrnvo/resonator.hpp"
#include "hrnvo/synth.hpp"

namespace py = pybind11;
using namespace hrnvo;

namespace {

PhasorVector pyRandomSeed(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return randomSeed(n, rng);
}

PhasorVector pyPeriodicSeed(Eigen::Index n, int period, std::uint64_t seed) {
  Rng rng(seed);
  return periodicSeed(n, period, rng);
}

PhasorVector pyBundle(const std::vector<PhasorVector>& vs) {
  return bundle(std::span<const PhasorVector>(vs.data(), vs.size()));
}

struct PyEngine {
  std::shared_ptr<CodebookSet> books;
  std::shared_ptr<FrameTransform> transform;
};

BinaryFrame frameFromArray(const Eigen::MatrixXd& image, double t) {
  BinaryFrame f;
  f.grid = {static_cast<int>(image.cols()), static_cast<int>(image.rows())};
  f.bits = image;
  f.tMid = t;
  return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hierarchical resonator visual odometry core";

  m.def("random_seed", &pyRandomSeed, py::arg("n"), py::arg("seed"));
  m.def("periodic_seed", &pyPeriodicSeed, py::arg("n"), py::arg("period"), py::arg("seed"));
  m.def("frac_pow", &fracPow, py::arg("seed"), py::arg("exponent"));
  m.def("bind", &hrnvo::bind, py::arg("a"), py::arg("b"));
  m.def("unbind", &unbind, py::arg("a"), py::arg("b"));
  m.def("bundle", &pyBundle, py::arg("vectors"));
  m.def("similarity", &similarity, py::arg("a"), py::arg("b"));
  m.def("normalize_phasor", &normalizePhasor, py::arg("v"));
  m.def("sharpen", &sharpen, py::arg("coefficients"), py::arg("k"));

  py::class_<PyEngine>(m, "Engine")
      .def(py::init([](int width, int height, const std::string& kind, std::uint64_t seed,
                       int angleBins, int radiusBins, double maxRadius, Eigen::Index dimension,
                       Eigen::Index polarDimension) {
             GridSpec grid{width, height};
             PolarGridSpec polar;
             polar.angleBins = angleBins;
             polar.radiusBins = radiusBins;
             polar.maxRadius = maxRadius;
             const CodebookKind k = kind == "random" ? CodebookKind::Random : CodebookKind::Dft;
             PyEngine engine;
             engine.books = std::make_shared<CodebookSet>(
                 buildCodebookSet(grid, polar, k, seed, dimension, polarDimension));
             engine.transform = buildFrameTransform(*engine.books);
             return engine;
           }),
           py::arg("width"), py::arg("height"), py::arg("kind") = "dft", py::arg("seed") = 1,
           py::arg("angle_bins") = 360, py::arg("radius_bins") = 32, py::arg("max_radius") = 0.0,
           py::arg("dimension") = 0, py::arg("polar_dimension") = 0)
      .def_property_readonly("dimension",
                             [](const PyEngine& e) { return e.books->cartPixels->dim(); })
      .def_property_readonly("polar_dimension",
                             [](const PyEngine& e) { return e.books->polarPixels->dim(); })
      .def("encode_image",
           [](const PyEngine& e, const Eigen::MatrixXd& image) {
             return e.books->cartPixels->encode(image);
           },
           py::arg("image"))
      .def("decode_image",
           [](const PyEngine& e, const PhasorVector& v) { return e.books->cartPixels->decode(v); },
           py::arg("v"))
      .def("to_polar", [](const PyEngine& e, const PhasorVector& v) { return e.transform->toPolar(v); })
      .def("to_cartesian",
           [](const PyEngine& e, const PhasorVector& v) { return e.transform->toCartesian(v); })
      .def("angle_seed", [](const PyEngine& e) { return e.books->angle.seed; })
      .def("h_seed", [](const PyEngine& e) { return e.books->hAxis.seed; })
      .def("v_seed", [](const PyEngine& e) { return e.books->vAxis.seed; });

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("h", &Estimate::hOut)
      .def_readonly("v", &Estimate::vOut)
      .def_readonly("r", &Estimate::rOut)
      .def_readonly("t", &Estimate::tMid)
      .def_readonly("h_profile", &Estimate::hProfile)
      .def_readonly("v_profile", &Estimate::vProfile)
      .def_readonly("r_profile", &Estimate::rProfile)
      .def_readonly("degenerate_input", &Estimate::degenerateInput)
      .def("__repr__", [](const Estimate& e) {
        return "Estimate(h=" + std::to_string(e.hOut) + ", v=" + std::to_string(e.vOut) +
               ", r=" + std::to_string(e.rOut) + ")";
      });

  py::class_<Resonator>(m, "Resonator")
      .def(py::init([](const PyEngine& engine, double gamma, double sharpenK,
                       int mapBlockIterations, double mu1, double mu2, int readoutWindow,
                       bool fusion) {
             ResonatorConfig cfg;
             cfg.gamma = gamma;
             cfg.sharpenK = sharpenK;
             cfg.mapBlockIterations = mapBlockIterations;
             cfg.mu1 = mu1;
             cfg.mu2 = mu2;
             cfg.readoutWindow = readoutWindow;
             cfg.fusionEnabled = fusion;
             return Resonator(engine.books, engine.transform, cfg);
           }),
           py::arg("engine"), py::arg("gamma") = 0.2, py::arg("sharpen_k") = 8.0,
           py::arg("map_block_iterations") = 100, py::arg("mu1") = 0.9, py::arg("mu2") = 0.02,
           py::arg("readout_window") = 5, py::arg("fusion") = false)
      .def("init",
           [](Resonator& r, const Eigen::MatrixXd& image, double t, std::uint64_t seed) {
             Rng rng(seed);
             r.init(frameFromArray(image, t), rng);
           },
           py::arg("image"), py::arg("t") = 0.0, py::arg("seed") = 1)
      .def("step_frame",
           [](Resonator& r, const Eigen::MatrixXd& image, double t,
              const std::optional<std::array<double, 3>>& imu, double dt) {
             std::optional<ImuRates> rates;
             if (imu) rates = ImuRates{(*imu)[0], (*imu)[1], (*imu)[2]};
             return r.stepFrame(frameFromArray(image, t), rates, dt);
           },
           py::arg("image"), py::arg("t") = 0.0, py::arg("imu") = std::nullopt,
           py::arg("dt") = 0.0)
      .def("map_image", [](const Resonator& r, const PyEngine& engine) {
        return engine.books->cartPixels->decode(r.state().mapHat);
      });

  m.def("umeyama",
        [](const Eigen::Matrix2Xd& src, const Eigen::Matrix2Xd& dst) {
          const SimilarityTransform2d t = umeyama2d(src, dst);
          return py::make_tuple(t.scale, t.rotation, t.translation);
        },
        py::arg("src"), py::arg("dst"));

  m.def("brute_force_register",
        [](const Eigen::MatrixXd& frame, const Eigen::MatrixXd& mapImage, double shiftRange,
           double angleRange, int shiftSteps, int angleSteps) {
          const RegistrationResult r = bruteForceRegister(frameFromArray(frame, 0.0), mapImage,
                                                          shiftRange, angleRange, shiftSteps,
                                                          angleSteps);
          return py::make_tuple(r.dx, r.dy, r.angleDeg, r.score);
        },
        py::arg("frame"), py::arg("map_image"), py::arg("shift_range"), py::arg("angle_range"),
        py::arg("shift_steps"), py::arg("angle_steps"));

  m.def("warp_image", &warpImage, py::arg("image"), py::arg("dx"), py::arg("dy"),
        py::arg("angle_deg"));
}
