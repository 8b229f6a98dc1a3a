#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "archk/errors.hpp"
#include "archk/io.hpp"
#include "support/generators.hpp"

using namespace archk;
using archk::testing::code_of;

namespace {

template <typename Fn>
std::string message_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

const std::string kSpaceJson = R"({
  "dimensions": [
    {"id": "A", "type": "categorical", "values": ["on", "off"]},
    {"id": "B", "type": "real", "lower": -1.0, "upper": 2.0},
    {"id": "C", "type": "categorical", "values": ["x", "y", "z"]}
  ],
  "conditions": [
    {"target": "B", "governor": "A", "allowed": ["on"]}
  ]
})";

SpacePtr parsed_space() { return ParamSpace::validate(parse_space_json(kSpaceJson)); }

}  // namespace

TEST_CASE("space json") {
  SUBCASE("parses dimensions and conditions") {
    const SpacePtr space = parsed_space();
    CHECK(space->size() == 3);
    CHECK(space->depth() == 2);
    const auto& dim_b = space->dimension("B");
    const auto& bounds = std::get<RealBounded>(dim_b.domain);
    CHECK(bounds.lower == -1.0);
    CHECK(bounds.upper == 2.0);
    CHECK(space->ancestors("B") == std::vector<std::string>{"A"});
  }
  SUBCASE("serialization round-trips and is idempotent") {
    const std::string once = space_to_json(parsed_space()->description());
    const SpacePtr again = ParamSpace::validate(parse_space_json(once));
    CHECK(space_to_json(again->description()) == once);
    CHECK(again->depth() == 2);
  }
  SUBCASE("rejects malformed and mistyped documents") {
    CHECK(code_of([] { parse_space_json("{ nope"); }) == Errc::ParseError);
    CHECK(code_of([] { parse_space_json("[1,2]"); }) == Errc::ParseError);
    CHECK(code_of([] { parse_space_json(R"({"dimensions": 4})"); }) == Errc::ParseError);
    CHECK(code_of([] {
            parse_space_json(R"({"dimensions": [{"id":"A","type":"real"}]})");
          }) == Errc::ParseError);  // missing lower/upper
    CHECK(code_of([] {
            parse_space_json(R"({"dimensions": [{"id":"A","type":"weird","values":["a","b"]}]})");
          }) == Errc::ParseError);
    CHECK(code_of([] {
            parse_space_json(
                R"({"dimensions": [{"id":"A","type":"real","lower":0,"upper":1,"extra":1}]})");
          }) == Errc::ParseError);  // unknown key
    CHECK(code_of([] {
            parse_space_json(R"({"dimensions": [], "conditions": [], "bonus": true})");
          }) == Errc::ParseError);
    CHECK(code_of([] {
            parse_space_json(
                R"({"dimensions": [{"id":"A","type":"categorical","values":["a",3]}]})");
          }) == Errc::ParseError);  // non-string category
  }
  SUBCASE("structural problems surface as validation errors, not parse errors") {
    CHECK(code_of([] {
            ParamSpace::validate(parse_space_json(
                R"({"dimensions": [{"id":"A","type":"real","lower":1,"upper":1}]})"));
          }) == Errc::EmptyBounds);
  }
}

TEST_CASE("config json") {
  const SpacePtr space = parsed_space();

  SUBCASE("values keep their declared type") {
    const Config config = parse_config_json(R"({"A": "on", "B": 0.5, "C": "x"})");
    CHECK(std::get<std::string>(*config.find("A")) == "on");
    CHECK(std::get<double>(*config.find("B")) == 0.5);
    CHECK_NOTHROW(space->validate_config(config));
  }
  SUBCASE("serialization follows declaration order and round-trips") {
    Config config;
    config.set("C", "z");
    config.set("A", "off");
    const std::string text = config_to_json(*space, config);
    CHECK(text == R"({"A":"off","C":"z"})");
    CHECK(parse_config_json(text) == config);
  }
  SUBCASE("17-digit reals survive the round trip") {
    Config config;
    config.set("A", "on");
    config.set("B", 0.1 + 0.2);
    const Config back = parse_config_json(config_to_json(*space, config));
    CHECK(std::get<double>(*back.find("B")) == 0.1 + 0.2);
  }
  SUBCASE("rejects non-objects and non-scalar values") {
    CHECK(code_of([] { parse_config_json("[]"); }) == Errc::ParseError);
    CHECK(code_of([] { parse_config_json(R"({"A": [1]})"); }) == Errc::ParseError);
    CHECK(code_of([] { parse_config_json(R"({"A": null})"); }) == Errc::ParseError);
  }
  SUBCASE("config lists carry positions in error messages") {
    const std::vector<Config> list = parse_config_list_json(R"([{"A":"on"},{"A":"off"}])");
    CHECK(list.size() == 2);
    CHECK(code_of([] { parse_config_list_json(R"({"A":"on"})"); }) == Errc::ParseError);
    const std::string msg =
        message_of([] { parse_config_list_json(R"([{"A":"on"}, {"A": null}])"); });
    CHECK(msg.find("config 2") != std::string::npos);
  }
}

TEST_CASE("kernel spec json") {
  const SpacePtr space = parsed_space();

  SUBCASE("defaults cascade into per-dimension entries") {
    const KernelSpec spec = parse_kernel_spec_json(space, R"({
      "combination": "sum",
      "default": {"gamma": 0.5, "kernel": {"type": "eq", "sigma": 2.0}},
      "dimensions": {"B": {"rho": 0.25}}
    })");
    CHECK(spec.combination() == Combination::Sum);
    const DimKernel& a = spec.dim_kernel("A");
    CHECK(a.gamma == 0.5);
    CHECK(a.rho == 1.0);
    CHECK(std::get<ExponentiatedQuadratic>(a.base).sigma == 2.0);
    CHECK(std::get<ExponentiatedQuadratic>(a.base).lambda == 1.0);
    const DimKernel& b = spec.dim_kernel("B");
    CHECK(b.gamma == 0.5);   // inherited
    CHECK(b.rho == 0.25);    // overridden
  }
  SUBCASE("a kernel object stands alone rather than merging field-wise") {
    const KernelSpec spec = parse_kernel_spec_json(space, R"({
      "combination": "product",
      "default": {"kernel": {"type": "eq", "sigma": 3.0, "lambda": 5.0}},
      "dimensions": {"B": {"kernel": {"type": "rq", "alpha": 2.0}}}
    })");
    const auto& rq = std::get<RationalQuadratic>(spec.dim_kernel("B").base);
    CHECK(rq.alpha == 2.0);
    CHECK(rq.sigma == 1.0);  // not 3.0: the override replaced the whole kernel
    CHECK(rq.lambda == 1.0);
  }
  SUBCASE("combination is required and validated") {
    CHECK(code_of([&] { parse_kernel_spec_json(space, R"({})"); }) == Errc::ParseError);
    CHECK(code_of([&] {
            parse_kernel_spec_json(space, R"({"combination": "mean"})");
          }) == Errc::ParseError);
  }
  SUBCASE("unknown dimensions and keys are rejected") {
    CHECK(code_of([&] {
            parse_kernel_spec_json(space,
                                   R"({"combination":"sum","dimensions":{"Q":{"rho":0.5}}})");
          }) == Errc::UnknownDimension);
    CHECK(code_of([&] {
            parse_kernel_spec_json(space, R"({"combination":"sum","speed":"fast"})");
          }) == Errc::ParseError);
    CHECK(code_of([&] {
            parse_kernel_spec_json(space,
                                   R"({"combination":"sum","default":{"weight":2}})");
          }) == Errc::ParseError);
    CHECK(code_of([&] {
            parse_kernel_spec_json(
                space, R"({"combination":"sum","default":{"kernel":{"type":"eq","nu":1}}})");
          }) == Errc::ParseError);
  }
  SUBCASE("hyperparameter validation still applies") {
    CHECK(code_of([&] {
            parse_kernel_spec_json(space, R"({"combination":"sum","default":{"gamma":1.5}})");
          }) == Errc::GammaOutOfRange);
  }
  SUBCASE("serialization round-trips to the same canonical form") {
    const KernelSpec spec = parse_kernel_spec_json(space, R"({
      "combination": "sum",
      "default": {"gamma": 0.75, "kernel": {"type": "rq", "alpha": 0.5}},
      "dimensions": {"C": {"rho": 0.125, "kernel": {"type": "eq", "lambda": 2.0}}}
    })");
    const std::string text = kernel_spec_to_json(spec);
    const KernelSpec back = parse_kernel_spec_json(space, text);
    CHECK(canonical_spec_line(back) == canonical_spec_line(spec));
    CHECK(kernel_spec_to_json(back) == text);
  }
}

TEST_CASE("dataset csv") {
  const SpacePtr space = parsed_space();

  SUBCASE("parses configs, blanks, and targets") {
    const TableData table = parse_dataset_csv(*space, "A,B,C,y\non,0.5,x,1.25\noff,,y,-2\n");
    REQUIRE(table.configs.size() == 2);
    REQUIRE(table.targets.has_value());
    CHECK((*table.targets)(0) == 1.25);
    CHECK((*table.targets)(1) == -2.0);
    CHECK_FALSE(table.configs[1].has("B"));  // inactive, blank cell
    CHECK(std::get<double>(*table.configs[0].find("B")) == 0.5);
  }
  SUBCASE("header may reorder columns and omit y") {
    const TableData table = parse_dataset_csv(*space, "C,A,B\nz,off,\n");
    CHECK_FALSE(table.targets.has_value());
    CHECK(std::get<std::string>(*table.configs[0].find("C")) == "z");
  }
  SUBCASE("comments and blank lines are skipped") {
    const TableData table =
        parse_dataset_csv(*space, "# produced by a tool\nA,B,C\n\non,0.5,x\n# trailing\n");
    CHECK(table.configs.size() == 1);
  }
  SUBCASE("quoted cells carry commas and escaped quotes") {
    SpaceDescription desc;
    Dimension d;
    d.id = "D";
    d.domain = Categorical{{"a,b", "say \"hi\"", "plain"}};
    desc.dimensions = {d};
    const SpacePtr quoting = ParamSpace::validate(desc);
    const TableData table = parse_dataset_csv(*quoting, "D\n\"a,b\"\n\"say \"\"hi\"\"\"\n");
    REQUIRE(table.configs.size() == 2);
    CHECK(std::get<std::string>(*table.configs[0].find("D")) == "a,b");
    CHECK(std::get<std::string>(*table.configs[1].find("D")) == "say \"hi\"");

    std::vector<Config> back = table.configs;
    const std::string text = dataset_to_csv(*quoting, back);
    CHECK(parse_dataset_csv(*quoting, text).configs == back);
  }
  SUBCASE("round trip preserves values bitwise") {
    Rng rng(11);
    const auto [configs, targets] = archk::testing::random_dataset(*space, rng, 8);
    const std::string text = dataset_to_csv(*space, configs, &targets, "note");
    CHECK(text.rfind("# note", 0) == 0);
    const TableData back = parse_dataset_csv(*space, text);
    CHECK(back.configs == configs);
    REQUIRE(back.targets.has_value());
    for (int i = 0; i < targets.size(); ++i) CHECK((*back.targets)(i) == targets(i));
  }
  SUBCASE("header errors") {
    CHECK(code_of([&] { parse_dataset_csv(*space, ""); }) == Errc::ParseError);
    CHECK(code_of([&] { parse_dataset_csv(*space, "A,B\non,1\n"); }) == Errc::ParseError);
    CHECK(code_of([&] { parse_dataset_csv(*space, "A,B,C,A\non,1,x,on\n"); }) ==
          Errc::ParseError);
    CHECK(code_of([&] { parse_dataset_csv(*space, "A,B,C,z\non,1,x,3\n"); }) ==
          Errc::ParseError);
    const std::string msg =
        message_of([&] { parse_dataset_csv(*space, "A,y,B,C\non,1,0.5,x\n"); });
    CHECK(msg.find("'y' must be the last column") != std::string::npos);
  }
  SUBCASE("row errors carry 1-based data row numbers and keep their codes") {
    CHECK(code_of([&] {
            parse_dataset_csv(*space, "A,B,C,y\non,0.5,x,1\non,7.0,x,2\n");
          }) == Errc::ValueOutOfBounds);
    const std::string msg = message_of([&] {
      parse_dataset_csv(*space, "A,B,C,y\non,0.5,x,1\non,7.0,x,2\n");
    });
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(code_of([&] { parse_dataset_csv(*space, "A,B,C\non,0.5\n"); }) == Errc::ParseError);
    CHECK(code_of([&] { parse_dataset_csv(*space, "A,B,C,y\non,0.5,x,\noff,,y,1\n"); }) ==
          Errc::ParseError);  // y mixes empty and filled
    CHECK(code_of([&] { parse_dataset_csv(*space, "A,B,C,y\non,0.5,x,nan-ish\n"); }) ==
          Errc::ParseError);
    CHECK(code_of([&] { parse_dataset_csv(*space, "A,B,C,y\non,0.5e,x,1\n"); }) ==
          Errc::ParseError);  // trailing garbage in a number cell
  }
  SUBCASE("carriage returns are tolerated") {
    const TableData table = parse_dataset_csv(*space, "A,B,C,y\r\non,0.5,x,1.0\r\n");
    CHECK(table.configs.size() == 1);
  }
}

TEST_CASE("matrix csv") {
  SUBCASE("round trip is bitwise") {
    Eigen::MatrixXd m(2, 3);
    m << 0.1, 0.2, 0.1 + 0.2, -1.0, 1e-300, 12345.6789;
    const std::string text = matrix_to_csv(m, "gram");
    CHECK(text.rfind("# gram", 0) == 0);
    const Eigen::MatrixXd back = parse_matrix_csv(text);
    REQUIRE(back.rows() == 2);
    REQUIRE(back.cols() == 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) CHECK(back(i, j) == m(i, j));
  }
  SUBCASE("ragged and empty inputs are rejected") {
    CHECK(code_of([] { parse_matrix_csv("1,2\n3\n"); }) == Errc::ParseError);
    CHECK(code_of([] { parse_matrix_csv("# only a comment\n"); }) == Errc::ParseError);
    CHECK(code_of([] { parse_matrix_csv("1,two\n"); }) == Errc::ParseError);
    const std::string msg = message_of([] { parse_matrix_csv("1,2\n3\n"); });
    CHECK(msg.find("line 2") != std::string::npos);
  }
}

TEST_CASE("text files") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "archk_io_roundtrip.txt").string();
  write_text_file(path, "alpha\nbeta\n");
  CHECK(read_text_file(path) == "alpha\nbeta\n");
  std::remove(path.c_str());
  CHECK(code_of([&] { read_text_file(path); }) == Errc::IoError);
  CHECK(code_of([] { write_text_file("/nonexistent-dir/x/y.txt", "z"); }) == Errc::IoError);
}
