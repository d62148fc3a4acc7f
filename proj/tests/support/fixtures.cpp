#include "fixtures.hpp"

#include <atomic>

#include <unistd.h>

#include "pmllm/log_io.hpp"

namespace fixtures {

pmllm::EventLog log1() { return pmllm::parse_csv_log(kLog1Csv); }
pmllm::Ocel ocel1() { return pmllm::parse_ocel_json(kOcel1Json); }
pmllm::PetriNet pn1() { return pmllm::parse_pnml(kPn1Pnml); }

RawLog random_raw_log(std::mt19937_64& rng, int max_cases, int max_events, int max_alphabet) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int alphabet = pick(1, max_alphabet);
  const int cases = pick(1, max_cases);
  RawLog out;
  for (int c = 0; c < cases; ++c) {
    RawCase rc{"case" + std::string(c < 10 ? "0" : "") + std::to_string(c), {}};
    std::int64_t clock = kJan1 + pick(0, 100000);
    const int n = pick(1, max_events);
    for (int e = 0; e < n; ++e) {
      clock += pick(0, 4) == 0 ? 0 : pick(1, 7200);
      rc.events.push_back({std::string(1, static_cast<char>('A' + pick(0, alphabet - 1))), clock});
    }
    out.push_back(std::move(rc));
  }
  return out;
}

std::filesystem::path data_dir() { return PMLLM_TEST_DATA_DIR; }
std::filesystem::path renderer_script() { return std::filesystem::path(PMLLM_TEST_DATA_DIR) / "fake_renderer.sh"; }
std::filesystem::path cli_binary() { return PMLLM_CLI_BINARY; }

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("pmllm-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace fixtures
