#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>

#include "dualhash/families.hpp"
#include "dualhash/keyfile.hpp"

using namespace dualhash;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(DUALHASH_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("dualhash_cli_" + std::to_string(getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(KeyFile, HeaderRoundTrip) {
  KeyFileHeader h;
  h.n = 1018;
  h.m = 1018;
  h.d = 1018;
  h.padding = 3;
  h.family = "kind=f1 n=2036 m=1018 l=2 k=1018 d=1018";
  const auto bytes = serialize_header(h);
  EXPECT_EQ(bytes.size(), KeyFileHeader::size);
  EXPECT_EQ(parse_header(bytes), h);
}

TEST(KeyFile, FileRoundTripAndErrors) {
  std::mt19937_64 gen(51);
  KeyFile k;
  k.payload = BitVector::random(77, gen);
  k.header.n = 77;
  const auto bytes = serialize_keyfile(k);
  EXPECT_EQ(bytes.size(), KeyFileHeader::size + 10);
  const auto back = parse_keyfile(bytes);
  EXPECT_EQ(back.payload, k.payload);
  EXPECT_EQ(back.header, k.header);

  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(parse_keyfile(bad), keyfile_error);
  auto shortb = bytes;
  shortb.pop_back();
  EXPECT_THROW(parse_keyfile(shortb), keyfile_error);
  auto ver = bytes;
  ver[8] = 9;
  EXPECT_THROW(parse_keyfile(ver), keyfile_error);
  KeyFileHeader longfam;
  longfam.family = std::string(100, 'a');
  EXPECT_THROW(serialize_header(longfam), keyfile_error);
}

TEST_F(CliTest, NaCommands) {
  EXPECT_EQ(first_line(run("na check 100").out), "true");
  EXPECT_EQ(first_line(run("na check 7").out), "false");
  const auto r = run("na find 1000000");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(first_line(r.out), "1000002");
  EXPECT_EQ(run("na find 10 --count 3").out, "10\n12\n18\n");
}

TEST_F(CliTest, AmplifyZeroSeedGivesLastBlock) {
  std::mt19937_64 gen(52);
  const auto x = BitVector::random(2036, gen);
  write_file(path("in.bin"), x.to_bytes());
  const std::string zero_seed(256, '0');  // 1024 bits
  const auto r = run("amplify --family f1 --l 2 --m 1018 --n 2036 --in " + path("in.bin") + " --seed-hex " + zero_seed);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(first_line(r.out), x.slice(1018, 1018).to_hex());
}

TEST_F(CliTest, AmplifyConsumesExactlyDSeedBits) {
  std::mt19937_64 gen(53);
  const auto x = BitVector::random(2036, gen);
  write_file(path("in.bin"), x.to_bytes());
  const auto seed = BitVector::random(1024, gen);
  write_file(path("seed.bin"), seed.to_bytes());
  const auto r = run("amplify --family f1 --l 2 --m 1018 --n 2036 --in " + path("in.bin") + " --seed-file " +
                     path("seed.bin") + " --out " + path("out.key") + " --t 1500");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto key = parse_keyfile(read_file(path("out.key")));
  EXPECT_EQ(key.header.d, 1018u);
  EXPECT_EQ(key.header.n, 1018u);
  EXPECT_EQ(parse_family(key.header.family), make_f1(1018, 2));
  EXPECT_EQ(key.payload, evaluate(make_f1(1018, 2), seed.slice(0, 1018), x));
  EXPECT_NE(r.out.find("epsilon at t=1500"), std::string::npos);

  // Bits past d in the seed file are ignored.
  auto seed2 = seed;
  seed2.flip(1020);
  write_file(path("seed2.bin"), seed2.to_bytes());
  ASSERT_EQ(run("amplify --family f1 --l 2 --m 1018 --n 2036 --in " + path("in.bin") + " --seed-file " +
                path("seed2.bin") + " --out " + path("out2.key"))
                .code,
            0);
  EXPECT_EQ(read_file(path("out.key")), read_file(path("out2.key")));
}

TEST_F(CliTest, AmplifyShortSeedIsUsageError) {
  write_file(path("in.bin"), std::vector<std::uint8_t>(255, 0xab));
  const auto r = run("amplify --family f1 --l 2 --m 1018 --n 2036 --in " + path("in.bin") + " --seed-hex " +
                     std::string(254, '0'));
  EXPECT_EQ(r.code, 1);
}

TEST_F(CliTest, AmplifyDeterministicAndAcceptsKeyFiles) {
  std::mt19937_64 gen(54);
  KeyFile in;
  in.payload = BitVector::random(300, gen);
  in.header.n = 300;
  write_file(path("in.key"), serialize_keyfile(in));
  const std::string seed = BitVector::random(400, gen).to_hex();
  const std::string args = "amplify --family f2 --m 200 --in " + path("in.key") + " --seed-hex " + seed + " --out ";
  ASSERT_EQ(run(args + path("a.key")).code, 0);
  ASSERT_EQ(run(args + path("b.key")).code, 0);
  EXPECT_EQ(read_file(path("a.key")), read_file(path("b.key")));
  const auto out = parse_keyfile(read_file(path("a.key")));
  const auto spec = parse_family(out.header.family);
  EXPECT_EQ(out.header.padding, spec.n - 300);
  EXPECT_EQ(out.payload, evaluate(spec, BitVector::from_hex(seed, spec.d), in.payload.resized(spec.n)));
}

TEST_F(CliTest, AmplifyReportsPenalty) {
  write_file(path("in.bin"), std::vector<std::uint8_t>(8, 0x5a));
  const auto r = run("amplify --family mt --m 16 --in " + path("in.bin") + " --seed-hex " + std::string(16, 'f') +
                     " --t 60 --seed-minentropy 50");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("direct"), std::string::npos);
  EXPECT_NE(r.out.find("collision"), std::string::npos);
  const auto no_t = run("amplify --family mt --m 16 --in " + path("in.bin") + " --seed-hex " + std::string(16, 'f'));
  EXPECT_EQ(no_t.code, 0);
  EXPECT_NE(no_t.out.find("report omitted"), std::string::npos);
}

TEST_F(CliTest, VerifyExitCodes) {
  const auto ok = run("verify --family f1 --n 4 --m 2 --csv " + path("v.csv"));
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("all checks passed"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("v.csv")));
  EXPECT_EQ(run("verify --family f2 --n 6 --m 4 --seed-minentropy 1").code, 0);
  EXPECT_EQ(run("verify --family mt --n 6 --m 3").code, 0);
  EXPECT_EQ(run("verify --family f3 --n 8 --m 4 --t 6").code, 2);
}

TEST_F(CliTest, BoundsPenaltyOnlyBelowD) {
  const auto same = run("bounds --n 100 --m 40 --t 70 --d 60 --seed-minentropy 60");
  EXPECT_EQ(same.code, 0);
  EXPECT_EQ(same.out.find("non-uniform"), std::string::npos);
  const auto less = run("bounds --n 100 --m 40 --t 70 --d 60 --seed-minentropy 50");
  EXPECT_NE(less.out.find("non-uniform"), std::string::npos);
  EXPECT_EQ(run("bounds --n 100 --m 40 --t 70 --d 60 --seed-minentropy 70").code, 1);
}

TEST_F(CliTest, CompareSevenRows) {
  const auto r = run("compare --csv " + path("c.csv"));
  ASSERT_EQ(r.code, 0);
  const auto csv = read_file(path("c.csv"));
  std::istringstream in(std::string(csv.begin(), csv.end()));
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 7);
  for (const char* name : {"F3", "F4", "MT", "TSSR", "pairwise", "Trevisan"})
    EXPECT_NE(r.out.find(name), std::string::npos);
  EXPECT_NE(run("compare --numeric").out.find("leading-order"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("bogus").code, 1);
  EXPECT_EQ(run("bounds --n 10").code, 1);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("amplify --m 2 --in /nonexistent/file --seed-hex 00").code, 1);
}

TEST_F(CliTest, BenchSmall) {
  const auto r = run("bench --n 1000,2000 --reps 1 --crossover");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Mbit/s"), std::string::npos);
  EXPECT_NE(r.out.find("crossover"), std::string::npos);
  EXPECT_NE(run("bench --n 40 --reps 1").out.find("schoolbook"), std::string::npos);
}
