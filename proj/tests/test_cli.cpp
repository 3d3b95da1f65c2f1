#include "doctest.h"

#include <filesystem>
#include <random>
#include <sstream>

#include "devdec/cli.hpp"
#include "devdec/decompose.hpp"
#include "devdec/io.hpp"
#include "devdec/physics.hpp"
#include "devdec/random.hpp"

using namespace devdec;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("devdec_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("counts prints the table row") {
  const auto r = run({"counts", "--order", "6"});
  CHECK(r.code == 0);
  CHECK(r.out == "15 36 40 29 15 5 1\n");
  const auto j = run({"counts", "-n", "4", "--format", "json"});
  CHECK(Json::parse(j.out)["dof"] == 81);
  CHECK(run({"counts", "--order", "-1"}).code == 2);
  CHECK(run({"counts"}).code == 2);
}

TEST_CASE("random is reproducible") {
  const auto a = run({"random", "--order", "3", "--seed", "42"});
  const auto b = run({"random", "--order", "3", "--seed", "42"});
  const auto c = run({"random", "--order", "3", "--seed", "43"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  CHECK(tensor_from_json(Json::parse(a.out)) == random_tensor(3, 42));
}

TEST_CASE("decompose, reconstruct and verify through files") {
  TempDir dir;
  const std::string t = dir / "t.json", d = dir / "d.json", r = dir / "r.json";
  REQUIRE(run({"random", "--order", "4", "--seed", "7", "--output", t}).code == 0);
  REQUIRE(run({"decompose", "--input", t, "--output", d}).code == 0);
  REQUIRE(run({"reconstruct", "--input", d, "--output", r}).code == 0);

  const Tensor orig = tensor_from_json(parse_json(read_text_file(t), t));
  const Tensor back = tensor_from_json(parse_json(read_text_file(r), r));
  CHECK((back - orig).norm() <= 1e-10 * orig.norm());

  const auto v = run({"verify", "--input", d, "--tensor", t, "--tolerance", "1e-10"});
  CHECK(v.code == 0);
  CHECK(v.out.find("PASSED") != std::string::npos);

  SUBCASE("a corrupted decomposition fails verification") {
    Json j = parse_json(read_text_file(d), d);
    j["parts"][5]["embedded"]["components"][3] = 0.75;
    const std::string bad = dir / "bad.json";
    write_text_file(bad, j.dump());
    const auto f = run({"verify", "--input", bad, "--tensor", t});
    CHECK(f.code == 1);
    CHECK(f.out.find("FAILED") != std::string::npos);
  }
  SUBCASE("verify against a tensor of another order is an input error") {
    const std::string t3 = dir / "t3.json";
    REQUIRE(run({"random", "--order", "3", "--output", t3}).code == 0);
    CHECK(run({"verify", "--input", d, "--tensor", t3}).code == 2);
  }
}

TEST_CASE("malformed input is reported with context") {
  TempDir dir;
  const std::string f = dir / "broken.json";
  write_text_file(f, "{\n  \"order\": 2,\n  \"components\": [1, 2,\n}\n");
  const auto r = run({"decompose", "--input", f});
  CHECK(r.code == 2);
  CHECK(r.err.find("broken.json") != std::string::npos);
  CHECK(r.err.find("line 4") != std::string::npos);

  write_text_file(f, R"({"order": 2, "components": [1, 2, 3]})");
  const auto wrong = run({"decompose", "--input", f});
  CHECK(wrong.code == 2);
  CHECK(wrong.err.find("components") != std::string::npos);

  CHECK(run({"decompose", "--input", dir / "missing.json"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
}

TEST_CASE("physics commands") {
  TempDir dir;
  SUBCASE("stiffness from Voigt text") {
    const std::string f = dir / "iso.txt";
    std::ostringstream s;
    const VoigtMatrix m = tensor_to_voigt(StiffnessTensor(isotropic_stiffness(2.0, 1.0)));
    s << m << '\n';
    write_text_file(f, s.str());
    const auto r = run({"stiffness", "--input", f, "--format", "json"});
    CHECK(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["lambda"].get<double>() == doctest::Approx(2.0));
    CHECK(j["mu"].get<double>() == doctest::Approx(1.0));
  }
  SUBCASE("stiffness rejects the wrong order and asymmetric Voigt") {
    const std::string t3 = dir / "t3.json";
    REQUIRE(run({"random", "--order", "3", "--output", t3}).code == 0);
    CHECK(run({"stiffness", "--input", t3}).code == 2);
    const std::string v = dir / "v.json";
    write_text_file(v, "[[1,2,0,0,0,0],[0,1,0,0,0,0],[0,0,1,0,0,0],[0,0,0,1,0,0],"
                       "[0,0,0,0,1,0],[0,0,0,0,0,1]]");
    CHECK(run({"stiffness", "--input", v}).code == 2);
    write_text_file(v, "1 0 0\n");
    const auto short_text = run({"stiffness", "--input", v});
    CHECK(short_text.code == 2);
    CHECK(short_text.err.find(":1:") != std::string::npos);
  }
  SUBCASE("coupling") {
    std::mt19937_64 gen(3);
    Tensor h = random_tensor(3, gen);
    h = 0.5 * (h + permute(h, {1, 0, 2}));
    const std::string f = dir / "h.json";
    write_text_file(f, to_json(h).dump());
    const auto r = run({"coupling", "--input", f, "--format", "json"});
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out)["roundtrip_residual"].get<double>() < 1e-10);
    const auto lit = run({"coupling", "--input", f, "--variant", "literal", "--format", "json"});
    CHECK(lit.code == 0);
    CHECK(Json::parse(lit.out)["roundtrip_residual"].get<double>() > 1e-3);
    const auto diff = run({"coupling", "--report-diff"});
    CHECK(diff.code == 0);
    CHECK(Json::parse(diff.out)["entries"].size() == 2);

    const std::string t4 = dir / "t4.json";
    REQUIRE(run({"random", "--order", "4", "--output", t4}).code == 0);
    CHECK(run({"coupling", "--input", t4}).code == 2);
    const std::string g = dir / "g.json";
    write_text_file(g, to_json(random_tensor(3, 1)).dump());
    CHECK(run({"coupling", "--input", g}).code == 2);
  }
}

TEST_CASE("closedform lists the coefficient table") {
  const auto r = run({"closedform", "--format", "json"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["order3"].size() == 7);
  CHECK(j["order4"].size() == 19);
}
