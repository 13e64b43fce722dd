#include <catch_amalgamated.hpp>

#include <unistd.h>

#include "lpr/config.hpp"

using namespace lpr;
using io::json;

TEST_CASE("doubles round-trip through text") {
  for (double v : {0.0, -0.0, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity(), std::nextafter(1.0, 2.0)})
    CHECK(io::parse_double(io::format_double(v)) == v);
  CHECK(io::format_double(std::nan("")) == "nan");
  CHECK_THROWS_AS(io::parse_double("1.5x"), ConfigError);
  CHECK_THROWS_AS(io::parse_double(""), ConfigError);
}

TEST_CASE("rationals, intervals and families from JSON") {
  CHECK(io::parse_rational(json(-7)) == Rational(-7));
  CHECK(io::parse_rational(json("3/6")) == Rational(1, 2));
  CHECK(io::parse_rational(json(" -5 / 4 ")) == Rational(-5, 4));
  CHECK(io::parse_rational(json("123456789012345678901234567890")) ==
        Rational(Integer("123456789012345678901234567890")));
  CHECK_THROWS_AS(io::parse_rational(json("1/0")), ConfigError);
  CHECK_THROWS_AS(io::parse_rational(json("1.5")), ConfigError);
  CHECK_THROWS_AS(io::parse_rational(json(0.5)), ConfigError);

  const Interval i = io::parse_interval(json::parse(R"(["1/2", 3])"));
  CHECK(i == Interval(Rational(1, 2), Rational(3)));
  CHECK(io::parse_interval(io::interval_json(i)) == i);
  CHECK_THROWS_AS(io::parse_interval(json::parse(R"([3, 1])")), ConfigError);
  CHECK_THROWS_AS(io::parse_interval(json::parse(R"([1])")), ConfigError);

  const DisjointFamily f = io::parse_family(json::parse(R"([[0, 20], [30, "101/2"]])"));
  CHECK(f.size() == 2);
  CHECK(io::parse_family(io::family_json(f)) == f);
  CHECK_THROWS_AS(io::parse_family(json::parse(R"([[0, 20], [10, 30]])")), ConfigError);
  CHECK_THROWS_AS(io::parse_family(json::parse(R"({"a": 1})")), ConfigError);
}

TEST_CASE("reader rejects unknown keys and wrong types") {
  const json j = json::parse(R"({"a": 1, "b": "x"})");
  io::Reader r(j, "cfg");
  int a = 0;
  r.get("a", a);
  CHECK(a == 1);
  CHECK_THROWS_AS(r.finish(), ConfigError);

  io::Reader typed(j, "cfg");
  int b = 0;
  CHECK_THROWS_AS(typed.get("b", b), ConfigError);
  CHECK_THROWS_AS(io::Reader(json::array(), "cfg"), ConfigError);
}

TEST_CASE("csv text") {
  io::Csv csv({"a", "b", "c"});
  csv.add({"1", "", "x"});
  csv.add({"2", "3", ""});
  CHECK(csv.str() == "a,b,c\n1,,x\n2,3,\n");
  const io::Csv back = io::Csv::parse(csv.str());
  CHECK(back.header() == csv.header());
  CHECK(back.rows() == csv.rows());
  CHECK(back.column("c") == 2);
  CHECK_THROWS_AS(back.column("d"), IoError);
  CHECK_THROWS(csv.add({"1"}));
  CHECK(io::Csv({"only"}).str() == "only\n");
  CHECK_THROWS_AS(io::Csv::parse(""), IoError);
}

TEST_CASE("file errors are i/o errors") {
  CHECK_THROWS_AS(io::read_file("/nonexistent/lpr/file"), IoError);
  const auto dir = std::filesystem::temp_directory_path() / ("lpr_io_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  io::write_file(dir / "blocker", "x");
  CHECK_THROWS_AS(io::write_file(dir / "blocker" / "sub.txt", "y"), IoError);
  io::write_file(dir / "bad.json", "{ not json");
  CHECK_THROWS_AS(io::read_json(dir / "bad.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment ids") {
  for (const auto& [id, name] : config::experiment_names()) {
    CHECK(config::parse_experiment(name) == id);
    CHECK(config::to_string(id) == name);
  }
  CHECK(config::experiment_names().size() == 9);
  CHECK_THROWS_AS(config::parse_experiment("nope"), ConfigError);
}

TEST_CASE("config echo round-trips") {
  {
    config::DecomposeConfig c;
    CHECK(config::decompose_from_json(config::to_json(c)) == c);
    c = config::decompose_from_json(json::parse(R"({"families": [[[0, 20], [30, 50]], [["1/2", 100]]],
                                                   "random_cases": 5, "family_params": {"max_count": 3}})"));
    CHECK(c.families.size() == 2);
    CHECK(c.random.max_count == 3);
    CHECK(config::decompose_from_json(config::to_json(c)) == c);
  }
  {
    config::DegreeConfig c = config::degree_from_json(json::parse(R"({"cases": 17})"));
    CHECK(c.cases == 17);
    CHECK(config::degree_from_json(config::to_json(c)) == c);
  }
  for (bool modes : {false, true}) {
    config::LprConfig c = config::lpr_from_json(json::object(), modes, "lpr", FamilyKind::long_intervals);
    CHECK(config::lpr_from_json(config::to_json(c, modes), modes, "lpr") == c);
    c = config::lpr_from_json(json::parse(R"({"n": 512, "period": "2", "p": 6, "d": 3, "r": "inf",
        "family": "long", "signal": "trig", "band": 40, "mean_zero": true, "trials": 128, "cases": 9,
        "refine_rounds": 0})"), modes, "lpr");
    CHECK(c.exp.spec.r == kInfinity);
    CHECK(c.exp.period == Rational(2));
    CHECK(config::lpr_from_json(config::to_json(c, modes), modes, "lpr") == c);
  }
  {
    config::DecayConfig c;
    CHECK(config::decay_from_json(config::to_json(c)) == c);
    c = config::decay_from_json(json::parse(R"({"m_last": 4, "samples": 3, "x": 0.5, "z": 1.5})"));
    CHECK(config::decay_from_json(config::to_json(c)) == c);
  }
  {
    config::DirichletConfig c;
    CHECK(config::dirichlet_from_json(config::to_json(c)) == c);
    c.integer = true;
    c.cases = 3;
    CHECK(config::dirichlet_from_json(config::to_json(c)) == c);
  }
  {
    config::MaximalConfig c;
    CHECK(config::maximal_from_json(config::to_json(c)) == c);
  }
  {
    config::BmoConfig c;
    CHECK(config::bmo_from_json(config::to_json(c)) == c);
    c.signal = "random";
    CHECK(config::bmo_from_json(config::to_json(c)) == c);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config::lpr_from_json(json::parse(R"({"n": 100})"), false, "lpr"), ConfigError);
  CHECK_THROWS_AS(config::lpr_from_json(json::parse(R"({"p": 1.5})"), false, "lpr"), ConfigError);
  CHECK_THROWS_AS(config::lpr_from_json(json::parse(R"({"p": "inf"})"), false, "lpr"), ConfigError);
  CHECK_THROWS_AS(config::lpr_from_json(json::parse(R"({"trials": 10})"), false, "lpr"), ConfigError);
  CHECK_THROWS_AS(config::lpr_from_json(json::parse(R"({"min_count": 5, "max_count": 2})"), false, "lpr"),
                  ConfigError);
  CHECK_THROWS_AS(config::lpr_from_json(json::parse(R"({"family": "circles"})"), false, "lpr"), ConfigError);
  CHECK_THROWS_AS(config::lpr_from_json(json::parse(R"({"extra": 1})"), false, "lpr"), ConfigError);
  // Dyadic mode needs intervals of length >= 4.
  CHECK_THROWS_AS(config::lpr_from_json(json::parse(R"({"family": "random"})"), true, "lpr"), ConfigError);
  CHECK_NOTHROW(config::lpr_from_json(json::parse(R"({"family": "random", "modes": "direct"})"), true, "lpr"));
  CHECK_THROWS_AS(config::decompose_from_json(json::parse(R"({"families": [[[0, 3]]]})")), ConfigError);
  CHECK_THROWS_AS(config::decay_from_json(json::parse(R"({"m_first": 0})")), ConfigError);
  CHECK_THROWS_AS(config::decay_from_json(json::parse(R"({"x": 1, "z": 1})")), ConfigError);
  CHECK_THROWS_AS(config::maximal_from_json(json::parse(R"({"ps": [0.5]})")), ConfigError);
  CHECK_THROWS_AS(config::bmo_from_json(json::parse(R"({"signal": "square"})")), ConfigError);
  CHECK_THROWS_AS(config::dirichlet_from_json(json::parse(R"({"min_length": 0})")), ConfigError);
}
