#include "wavemorph/dataset.hpp"
#include "wavemorph/features.hpp"
#include "wavemorph/filters.hpp"
#include "wavemorph/image_io.hpp"
#include "wavemorph/stack_io.hpp"
#include "wavemorph/text.hpp"
#include "wavemorph/wavelet.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

namespace fs = std::filesystem;
using namespace wavemorph;

namespace {

struct Result {
  int code = -1;
  std::string output;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "wavemorph_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Result run(const std::string& args) {
  const std::string cmd = "cd '" + work_dir().string() + "' && '" WAVEMORPH_CLI "' " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (const std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& name) { return read_text_file(work_dir() / name); }

std::set<std::string> listing(const fs::path& dir) {
  std::set<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) out.insert(fs::relative(e.path(), dir).string());
  return out;
}

void make_dataset(const std::string& name, int seed) {
  const auto r = run("gen-synthetic-dataset -o " + name + " --n-bonafide 30 --n-morphed 30 --size 32 --seed " +
                     std::to_string(seed));
  REQUIRE_MESSAGE(r.code == 0, r.output);
}

} // namespace

TEST_CASE("decompose reports 48 bands and writes the stack") {
  make_dataset("one", 1);
  const auto r = run("decompose one/bonafide/bf_0003.pgm -o bf.wst --wavelet db2");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(r.output.find("bands: 48") != std::string::npos);
  CHECK(r.output.find("config: wavelet = db2") != std::string::npos);
  const auto stack = read_wst(work_dir() / "bf.wst");
  const auto expected = decompose_48(read_image(work_dir() / "one/bonafide/bf_0003.pgm"), daubechies2());
  CHECK(stack == decode_wst(encode_wst(expected)));
  const auto log = nlohmann::json::parse(slurp("bf.wst.run.json"));
  CHECK(log["command"] == "decompose");
  CHECK(log["config"]["wavelet"] == "db2");
  CHECK(log["inputs"][0]["fnv1a64"].get<std::string>().size() == 16);
}

TEST_CASE("decompose input errors exit with code 2") {
  write_pgm(work_dir() / "tiny.pgm", Image(4, 4, 0.5));
  auto r = run("decompose tiny.pgm -o tiny.wst");
  CHECK(r.code == 2);
  CHECK(r.output.find("support") != std::string::npos);
  CHECK_FALSE(fs::exists(work_dir() / "tiny.wst"));

  r = run("decompose does_not_exist.pgm -o x.wst");
  CHECK(r.code == 2);
  CHECK(r.output.find("does_not_exist.pgm") != std::string::npos);

  CHECK(run("decompose").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("decompose tiny.pgm -o x.wst --wavelet sym8").code == 2);
}

TEST_CASE("unwritable output exits with code 3") {
  make_dataset("one", 1);
  const auto r = run("decompose one/bonafide/bf_0000.pgm -o /proc/no/such/dir/out.wst");
  CHECK(r.code == 3);
}

TEST_CASE("rank over three datasets: averaged column equals the mean of zero-meaned columns") {
  make_dataset("alpha", 11);
  make_dataset("beta", 12);
  make_dataset("gamma", 13);
  const auto r = run("rank alpha beta gamma -o rank3.csv --resize 0");
  REQUIRE_MESSAGE(r.code == 0, r.output);

  std::istringstream in(slurp("rank3.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "subband,dataset,kl_bits,kl_zero_meaned,kl_averaged,rank");
  std::map<std::string, std::map<int, double>> kl, zero;
  std::map<int, double> averaged;
  std::map<int, int> ranks;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const auto f = split(line, ',');
    REQUIRE(f.size() == 6);
    const int band = std::stoi(f[0]);
    kl[f[1]][band] = std::stod(f[2]);
    zero[f[1]][band] = std::stod(f[3]);
    averaged[band] = std::stod(f[4]);
    ranks[band] = std::stoi(f[5]);
    ++rows;
  }
  CHECK(rows == 3 * 48);
  REQUIRE(kl.size() == 3);
  for (const auto& [ds, values] : kl) {
    REQUIRE(values.size() == 48);
    double mean = 0.0;
    for (const auto& [b, v] : values) mean += v / 48.0;
    double sum = 0.0;
    for (const auto& [b, v] : values) {
      CHECK(zero[ds][b] == doctest::Approx(v - mean).epsilon(1e-12));
      sum += zero[ds][b];
    }
    CHECK(std::abs(sum) < 1e-9);
  }
  for (int b = 1; b <= 48; ++b) {
    const double mean = (zero["alpha"][b] + zero["beta"][b] + zero["gamma"][b]) / 3.0;
    CHECK(averaged[b] == doctest::Approx(mean).epsilon(1e-12));
  }
  for (int a = 1; a <= 48; ++a)
    for (int b = 1; b <= 48; ++b)
      if (ranks[a] < ranks[b]) CHECK(averaged[a] >= averaged[b]);
}

TEST_CASE("select, evaluate and idempotent outputs") {
  make_dataset("one", 1);
  REQUIRE(run("rank one -o r1.csv --resize 0").code == 0);
  const std::string first = slurp("r1.csv");
  REQUIRE(run("rank one -o r1.csv --resize 0").code == 0);
  CHECK(slurp("r1.csv") == first);

  auto r = run("select --ranking r1.csv --top-k 22 -o sel.json");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  const auto sel = nlohmann::json::parse(slurp("sel.json"));
  CHECK(sel["indices"].size() == 22);
  CHECK(sel["policy"]["kind"] == "top_k");
  CHECK(run("select --ranking r1.csv -o sel2.json").code == 2);
  CHECK(run("select --ranking r1.csv --top-k 49 -o sel2.json").code == 2);
  REQUIRE(run("select --ranking r1.csv --threshold 0 -o selt.json").code == 0);
  const auto selt = nlohmann::json::parse(slurp("selt.json"));
  CHECK(selt["policy"]["kind"] == "threshold");
  CHECK(selt["indices"].size() >= 1);

  write_text_file(work_dir() / "sep.csv", "image_id,label,score\na,bonafide,0.1\nb,bonafide,0.2\n"
                                          "c,morphed,0.8\nd,morphed,0.9\n");
  r = run("evaluate --scores sep.csv -o metrics.json --det det.csv");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  const auto metrics = nlohmann::json::parse(slurp("metrics.json"));
  CHECK(metrics["deer"] == 0.0);
  CHECK(metrics["bpcer_at_5"] == 0.0);
  CHECK(metrics["bpcer_at_10"] == 0.0);
  CHECK(metrics["auc"] == 1.0);
  CHECK(slurp("det.csv").rfind("threshold,apcer,bpcer\n", 0) == 0);

  REQUIRE(run("sweep one --resize 0 --k 1,5 -o sw.csv --scores sc.csv --score-k 5").code == 0);
  const std::string sweep_first = slurp("sw.csv") + slurp("sc.csv");
  REQUIRE(run("sweep one --resize 0 --k 1,5 -o sw.csv --scores sc.csv --score-k 5").code == 0);
  CHECK(slurp("sw.csv") + slurp("sc.csv") == sweep_first);
  CHECK(slurp("sw.csv").rfind("k,auc_validation\n1,", 0) == 0);
  CHECK(run("evaluate --scores sc.csv -o m2.json").code == 0);
}

TEST_CASE("export writes one tensor per image in selection order") {
  make_dataset("one", 1);
  REQUIRE(run("rank one -o r1.csv --resize 0").code == 0);
  REQUIRE(run("select --ranking r1.csv --top-k 22 -o sel.json").code == 0);
  const auto r = run("export one --selection sel.json -o tensors --resize 0");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  const auto sel = nlohmann::json::parse(slurp("sel.json"))["indices"].get<std::vector<int>>();
  const auto t = read_wsb(work_dir() / "tensors" / "morphed__mo_0007.wsb");
  REQUIRE(t.channels.size() == 22);
  const auto stack = decode_wst(encode_wst(decompose_48(read_image(work_dir() / "one/morphed/mo_0007.pgm"), haar())));
  for (std::size_t c = 0; c < 22; ++c) CHECK(t.channels[c] == stack.band(sel[c]));
  CHECK(nlohmann::json::parse(slurp("tensors/export.json"))["indices"] == sel);
}

TEST_CASE("degenerate and invalid datasets") {
  const fs::path tinyset = work_dir() / "pair";
  fs::create_directories(tinyset / "bonafide");
  fs::create_directories(tinyset / "morphed");
  write_pgm(tinyset / "bonafide" / "a.pgm", Image(16, 16, 0.25));
  Image ramp(16, 16);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp.values()[i] = static_cast<double>(i % 16) / 15.0;
  write_pgm(tinyset / "morphed" / "b.pgm", ramp);
  write_text_file(tinyset / "manifest.csv",
                  "image_id,path,label,split\na,bonafide/a.pgm,bonafide,train\nb,morphed/b.pgm,morphed,train\n");
  auto r = run("rank pair -o pair.csv --resize 0");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  std::istringstream in(slurp("pair.csv"));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 49);

  const fs::path empty = work_dir() / "nomorph";
  fs::create_directories(empty / "bonafide");
  fs::create_directories(empty / "morphed");
  write_pgm(empty / "bonafide" / "a.pgm", Image(16, 16, 0.25));
  r = run("rank nomorph -o nm.csv");
  CHECK(r.code == 2);
  CHECK(r.output.find("morphed") != std::string::npos);
  CHECK(run("rank missing_root -o nm.csv").code == 2);
}

TEST_CASE("flags override the config file") {
  make_dataset("one", 1);
  write_text_file(work_dir() / "run.cfg", "# settings\nresize = 0\ndist_bins = 0\n");
  CHECK(run("rank one -o c.csv --config run.cfg").code == 2);
  const auto r = run("rank one -o c.csv --config run.cfg --dist-bins 16");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(r.output.find("config: dist_bins = 16") != std::string::npos);
  CHECK(r.output.find("config: resize = 0") != std::string::npos);
  write_text_file(work_dir() / "bad.cfg", "colour = 3\n");
  CHECK(run("rank one -o c.csv --config bad.cfg").code == 2);
}

TEST_CASE("commands write only their declared outputs") {
  make_dataset("one", 1);
  const fs::path sandbox = work_dir() / "sandbox";
  fs::remove_all(sandbox);
  fs::create_directories(sandbox);
  const auto before = listing(work_dir());
  REQUIRE(run("rank one -o sandbox/r.csv --resize 0 --entropies sandbox/e.csv").code == 0);
  REQUIRE(run("synth-morph one/bonafide/bf_0000.pgm one/bonafide/bf_0001.pgm -o sandbox/m.png").code == 0);
  auto after = listing(work_dir());
  for (const auto& name : before) after.erase(name);
  CHECK(after == std::set<std::string>{"sandbox/r.csv", "sandbox/r.csv.run.json", "sandbox/e.csv",
                                       "sandbox/m.png", "sandbox/m.png.run.json"});
  const Image m = read_image(sandbox / "m.png");
  const Image a = read_image(work_dir() / "one/bonafide/bf_0000.pgm");
  const Image b = read_image(work_dir() / "one/bonafide/bf_0001.pgm");
  CHECK(max_abs_difference(m, synth_morph(a, b, 0.5)) <= 0.5 / 255.0 + 1e-12);
}
