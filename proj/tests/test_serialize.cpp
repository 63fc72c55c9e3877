#include "support.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "expolat/serialize.hpp"

using namespace testing;
namespace js = expolat::json;

namespace {

std::string golden_path(std::uint64_t seed) {
  return std::string(EXPOLAT_TEST_DATA) + "/instance_seed_" + std::to_string(seed) + ".json";
}

}  // namespace

TEST_CASE("scalar json conventions") {
  CHECK(js::to_json(Scalar::exact(mpq_class(3, 4), -1)).dump() == R"(["3/4","-1"])");
  CHECK(exactly_equal(js::scalar_from_json(js::parse(R"(["3/4","-1"])")), Scalar::exact(mpq_class(3, 4), -1)));
  CHECK(exactly_equal(js::scalar_from_json(js::parse("[2,0]")), Scalar(2)));
  const Scalar f = js::scalar_from_json(js::parse("[0.5,0]"));
  CHECK_FALSE(f.is_exact());
  CHECK(f.to_complex() == Complex(0.5, 0.0));
  CHECK(js::to_json(Scalar::floating(0.25, -1.5)).dump() == "[0.25,-1.5]");
  CHECK(error_code_of([] { js::scalar_from_json(js::parse("[1]")); }) == ErrorCode::parse_error);
  CHECK(error_code_of([] { js::scalar_from_json(js::parse(R"(["a","0"])")); }) == ErrorCode::parse_error);
}

TEST_CASE("malformed text is a parse error") {
  CHECK(error_code_of([] { js::parse("{\"dim\": "); }) == ErrorCode::parse_error);
  CHECK(error_code_of([] { js::exppoly_from_json(js::parse(R"({"terms": []})")); }) == ErrorCode::parse_error);
  const auto e = js::error_json(ErrorCode::insufficient_box, "too small");
  CHECK(e.dump() == R"({"error":"insufficient-box","detail":"too small"})");
}

TEST_CASE("exppoly json layout") {
  const js::Json j = js::to_json(n_two_n());
  CHECK(j.dump() == R"({"dim":1,"terms":[{"lambda":[["2","0"]],"coeffs":[{"alpha":[1],"c":["1","0"]}]}]})");
}

TEST_CASE("exact round trips are lossless") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    oracle::InstanceProfile p;
    p.dim = 1 + seed % 3;
    p.max_terms = 4;
    p.max_degree = 3;
    p.box_side = 3;
    const auto inst = oracle::random_instance(seed, p);
    const js::Json j = js::to_json(inst.f);
    const ExpPoly back = js::exppoly_from_json(js::parse(j.dump()));
    CHECK(equivalent(back, inst.f));
    CHECK(js::to_json(back).dump() == j.dump());

    const SampledFunction s = js::sampled_from_json(js::parse(js::to_json(*inst.samples).dump()));
    CHECK(same_exact_samples(s, *inst.samples));
  }
}

TEST_CASE("float round trips preserve doubles") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    oracle::InstanceProfile p;
    p.dim = 1 + seed % 2;
    p.exact = false;
    const ExpPoly f = oracle::random_instance(seed, p).f;
    const ExpPoly back = js::exppoly_from_json(js::parse(js::to_json(f).dump()));
    CHECK(js::to_json(back).dump() == js::to_json(f).dump());
    CHECK(equivalent(back, f, 0.0));
  }
}

TEST_CASE("operator and space round trips") {
  DiffProduct p{{factor(witness({2, 3}), {1, 0}, 2), OpFactor{PhiTable{{LatticePoint{0, 1}, Scalar(5)}}, {0, 1}, 1}}};
  const DiffProduct q = js::product_from_json(js::parse(js::to_json(p).dump()));
  REQUIRE(q.factors.size() == 2);
  CHECK(q.factors[0].is_witness());
  CHECK(q.factors[0].power == 2);
  CHECK(q.factors[1].shift == LatticePoint{0, 1});
  CHECK(exactly_equal(q.factors[1].phi_at_shift(), Scalar(5)));
  CHECK(js::to_json(q).dump() == js::to_json(p).dump());

  const SpanSpace v = SpanSpace::span(1, {power_of(2), n_two_n()});
  const SpanSpace w = js::span_from_json(js::parse(js::to_json(v).dump()));
  CHECK(w == v);
  const SpanSpace empty = js::span_from_json(js::parse(R"({"dim":0,"basis":[],"ambient_dim":2})"));
  CHECK(empty.ambient_dim() == 2);
  CHECK(empty.dimension() == 0);
}

TEST_CASE("golden random instances") {
  const bool regenerate = std::getenv("EXPOLAT_WRITE_GOLDEN") != nullptr;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::string text = js::to_json(oracle::random_instance(seed).f).dump(2) + "\n";
    if (regenerate) {
      std::ofstream(golden_path(seed)) << text;
      continue;
    }
    std::ifstream in(golden_path(seed));
    REQUIRE_MESSAGE(in.good(), "missing fixture " << golden_path(seed));
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == text);
  }
}
