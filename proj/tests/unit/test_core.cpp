#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <set>

#include "hrlab/core/io.hpp"
#include "hrlab/core/parallel.hpp"
#include "hrlab/core/random.hpp"

using namespace hrlab;

TEST(Random, DerivedSeedsAreStableAndDistinct) {
  EXPECT_EQ(derive_seed(7, "a", 0), derive_seed(7, "a", 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t root : {0ull, 1ull, 2ull})
    for (const char* tag : {"a", "b", "wep/trial/N=100"})
      for (std::uint64_t i = 0; i < 50; ++i) seen.insert(derive_seed(root, tag, i));
  EXPECT_EQ(seen.size(), 3u * 3u * 50u);
}

TEST(Random, StreamsReproduce) {
  Rng a = make_rng(42, "x", 3), b = make_rng(42, "x", 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Parallel, CoversEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Parallel, RethrowsWorkerFailure) {
  EXPECT_THROW(parallel_for(100, 3,
                            [](std::size_t i) {
                              if (i == 17) throw NumericError("boom");
                            }),
               NumericError);
}

TEST(Io, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 6.67430e-11, -2.5e300, 5e-324}) {
    const std::string s = io::format_double(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
}

TEST(Io, CsvChecksColumnCount) {
  io::CsvWriter csv({"a", "b"});
  csv.cell(1.5).cell(std::string_view("x"));
  csv.end_row();
  EXPECT_EQ(csv.str(), "a,b\n1.5,x\n");
  csv.cell(2.0);
  EXPECT_THROW(csv.end_row(), IoError);
}

TEST(Io, AtomicWriteLeavesNoTempFile) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hrlab_io_test";
  fs::remove_all(dir);
  io::write_file_atomic(dir / "f.csv", "a\n1\n");
  io::write_file_atomic(dir / "f.csv", "a\n2\n");
  EXPECT_EQ(io::read_file(dir / "f.csv"), "a\n2\n");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    (void)e;
    ++files;
  }
  EXPECT_EQ(files, 1u);
  EXPECT_THROW(io::read_file(dir / "missing.csv"), IoError);
  fs::remove_all(dir);
}
