#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "schedge/dataflow.hpp"
#include "schedge/datagen.hpp"
#include "schedge/error.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

using namespace schedge;
using namespace schedge::dataflow;

namespace {

std::vector<ApplicationSpec> uniform_apps(size_t num_apps, size_t tasks_each) {
  std::vector<ApplicationSpec> apps;
  for (size_t a = 0; a < num_apps; ++a) {
    char app_id[16];
    std::snprintf(app_id, sizeof(app_id), "a%03zu", a);
    std::vector<TaskSpec> tasks;
    for (size_t t = 0; t < tasks_each; ++t) {
      char task_id[24];
      std::snprintf(task_id, sizeof(task_id), "a%03zut%02zu", a, t);
      tasks.push_back(helpers::task(task_id, app_id));
    }
    apps.push_back(helpers::app(app_id, tasks));
  }
  return apps;
}

std::set<std::string> id_set(const std::vector<TaskSpec>& tasks) {
  std::set<std::string> ids;
  for (const auto& t : tasks) ids.insert(t.task_id);
  return ids;
}

} // namespace

TEST_CASE("next_window delivers nothing off-interval") {
  auto apps = uniform_apps(3, 30);
  WorkloadCursor cursor(apps);
  WindowConfig cfg;
  Rng rng(1);
  CHECK(next_window(cursor, cfg, 7, rng).empty());
  CHECK(cursor.undelivered_tasks() == 90);
}

TEST_CASE("next_window drains a small backlog in one shuffled batch") {
  auto apps = uniform_apps(3, 30);
  WorkloadCursor cursor(apps);
  WindowConfig cfg; // 15 / 1000 / 40
  Rng rng(1);

  auto batch = next_window(cursor, cfg, 15, rng);
  REQUIRE(batch.size() == 90);
  CHECK(cursor.exhausted());

  std::set<std::string> expected;
  for (const auto& app : apps) {
    for (const auto& task : app.tasks) expected.insert(task.task_id);
  }
  CHECK(id_set(batch) == expected);

  // Order differs from insertion order for this seed.
  std::vector<std::string> insertion;
  for (const auto& app : apps) {
    for (const auto& task : app.tasks) insertion.push_back(task.task_id);
  }
  std::vector<std::string> delivered;
  for (const auto& task : batch) delivered.push_back(task.task_id);
  CHECK(delivered != insertion);
}

TEST_CASE("next_window caps tasks and apps") {
  auto apps = uniform_apps(50, 30);
  WorkloadCursor cursor(apps);
  WindowConfig cfg; // max_tasks 1000, max_apps 40
  Rng rng(1);

  auto batch = next_window(cursor, cfg, 0, rng);
  CHECK(batch.size() == 1000);
  std::set<std::string> apps_seen;
  for (const auto& task : batch) apps_seen.insert(task.app_id);
  CHECK(apps_seen.size() <= 40);
}

TEST_CASE("a truncated app leads the next window") {
  auto apps = uniform_apps(2, 30);
  WorkloadCursor cursor(apps);
  WindowConfig cfg;
  cfg.max_tasks = 40; // cuts the second app in half
  Rng rng(1);

  auto first = next_window(cursor, cfg, 0, rng);
  REQUIRE(first.size() == 40);
  auto second = next_window(cursor, cfg, 15, rng);
  REQUIRE(second.size() == 20);
  for (const auto& task : second) CHECK(task.app_id == "a001");

  // Delivered-once: the union across windows has no duplicates.
  std::set<std::string> all = id_set(first);
  for (const auto& task : second) CHECK(all.insert(task.task_id).second);
  CHECK(all.size() == 60);
}

TEST_CASE("delivered-once holds over randomized window configs") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng cfg_rng(seed);
    auto apps = uniform_apps(1 + cfg_rng.index(8), 1 + cfg_rng.index(40));
    WindowConfig cfg;
    cfg.interval_cycles = 1 + static_cast<uint32_t>(cfg_rng.index(20));
    cfg.max_tasks = 1 + static_cast<uint32_t>(cfg_rng.index(50));
    cfg.max_apps = 1 + static_cast<uint32_t>(cfg_rng.index(5));

    WorkloadCursor cursor(apps);
    Rng rng(seed + 1000);
    std::set<std::string> seen;
    uint64_t total = 0;
    for (uint64_t cycle = 0; cycle < 2000 && !cursor.exhausted(); ++cycle) {
      auto batch = next_window(cursor, cfg, cycle, rng);
      if (cycle % cfg.interval_cycles != 0) CHECK(batch.empty());
      CHECK(batch.size() <= cfg.max_tasks);
      std::set<std::string> batch_apps;
      for (const auto& task : batch) batch_apps.insert(task.app_id);
      CHECK(batch_apps.size() <= cfg.max_apps);
      for (const auto& task : batch) CHECK(seen.insert(task.task_id).second);
      total += batch.size();
    }
    uint64_t expected = 0;
    for (const auto& app : apps) expected += app.tasks.size();
    CHECK(total == expected);
  }
}

TEST_CASE("filter_ready matches the spec diamond") {
  auto diamond = helpers::app(
      "app1", {helpers::task("A", "app1"), helpers::task("B", "app1", {"A"}),
               helpers::task("C", "app1", {"A"}), helpers::task("D", "app1", {"B", "C"})});
  auto state = helpers::state_with({diamond}, {});
  // Mark A finished.
  state.remaining.erase("A");
  state.finished.insert("A");

  std::vector<TaskSpec> candidates = {state.tasks.at("B"), state.tasks.at("C"),
                                      state.tasks.at("D")};
  auto ready = filter_ready(state, candidates);
  REQUIRE(ready.size() == 2);
  CHECK(ready[0].task_id == "B");
  CHECK(ready[1].task_id == "C");
}

TEST_CASE("filter_ready edge cases") {
  auto app = helpers::app("app1", {helpers::task("A", "app1"), helpers::task("B", "app1", {"A"})});
  auto state = helpers::state_with({app}, {});

  SUBCASE("no predecessors: everything is ready, order preserved") {
    std::vector<TaskSpec> candidates = {state.tasks.at("A")};
    auto ready = filter_ready(state, candidates);
    REQUIRE(ready.size() == 1);
    CHECK(ready[0].task_id == "A");
  }
  SUBCASE("unfinished predecessors filter out") {
    std::vector<TaskSpec> candidates = {state.tasks.at("B")};
    CHECK(filter_ready(state, candidates).empty());
  }
  SUBCASE("unknown candidate raises") {
    std::vector<TaskSpec> candidates = {helpers::task("ghost", "app1")};
    CHECK_THROWS_AS(filter_ready(state, candidates), Error);
  }
}

TEST_CASE("filter_ready equals brute force on random states") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    datagen::GenConfig cfg;
    cfg.num_apps = 1;
    cfg.tasks_per_app = {2, 60};
    auto apps = datagen::generate_applications(cfg, rng);
    const auto& app = apps[0];

    auto state = helpers::state_with({app}, {});
    std::vector<std::string> finished_list;
    for (const auto& task : app.tasks) {
      if (rng.bernoulli(0.5)) {
        state.remaining.erase(task.task_id);
        state.finished.insert(task.task_id);
        finished_list.push_back(task.task_id);
      }
    }
    std::vector<TaskSpec> candidates;
    for (const auto& task : app.tasks) {
      if (state.remaining.contains(task.task_id)) candidates.push_back(task);
    }
    auto ready = filter_ready(state, candidates);
    std::vector<std::string> expected;
    for (const auto& task : candidates) {
      if (oracle::ready_brute_force(task, finished_list)) expected.push_back(task.task_id);
    }
    std::vector<std::string> got;
    for (const auto& task : ready) got.push_back(task.task_id);
    CHECK(got == expected);

    // Fast path over the whole remaining ledger agrees.
    auto fast = ready_tasks(state);
    std::vector<std::string> fast_ids;
    for (const auto* task : fast) fast_ids.push_back(task->task_id);
    std::sort(fast_ids.begin(), fast_ids.end());
    std::sort(got.begin(), got.end());
    CHECK(fast_ids == got);
  }
}

TEST_CASE("prioritize sorts by out-degree with id tie-break") {
  auto star = helpers::app(
      "app1", {helpers::task("A", "app1"), helpers::task("B", "app1", {"A"}),
               helpers::task("C", "app1", {"A"}), helpers::task("D", "app1", {"A"}),
               helpers::task("E", "app1")});
  auto index = build_graph_index(std::vector<ApplicationSpec>{star},
                                 PriorityMode::direct_successors);

  SUBCASE("single task") {
    std::vector<TaskSpec> ready = {star.tasks[0]};
    auto sorted = prioritize(ready, index);
    REQUIRE(sorted.size() == 1);
    CHECK(sorted[0].task_id == "A");
  }
  SUBCASE("star head first, isolated last") {
    std::vector<TaskSpec> ready = {star.tasks[4], star.tasks[0]}; // E, A
    auto sorted = prioritize(ready, index);
    REQUIRE(sorted.size() == 2);
    CHECK(sorted[0].task_id == "A"); // 3 successors
    CHECK(sorted[1].task_id == "E"); // 0 successors
  }
  SUBCASE("equal out-degrees sort by ascending id") {
    std::vector<TaskSpec> ready = {star.tasks[3], star.tasks[1], star.tasks[2]}; // D, B, C
    auto sorted = prioritize(ready, index);
    REQUIRE(sorted.size() == 3);
    CHECK(sorted[0].task_id == "B");
    CHECK(sorted[1].task_id == "C");
    CHECK(sorted[2].task_id == "D");
  }
  SUBCASE("unknown task raises") {
    std::vector<TaskSpec> ready = {helpers::task("ghost", "app1")};
    CHECK_THROWS_AS(prioritize(ready, index), Error);
  }
}

TEST_CASE("prioritize matches the out-degree oracle on random DAGs") {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    datagen::GenConfig cfg;
    cfg.num_apps = 1;
    cfg.tasks_per_app = {2, 40};
    auto apps = datagen::generate_applications(cfg, rng);
    const auto& app = apps[0];
    auto index = build_graph_index(apps, PriorityMode::direct_successors);
    auto degrees = oracle::out_degrees(app);

    auto sorted = prioritize(app.tasks, index);
    REQUIRE(sorted.size() == app.tasks.size());
    // Permutation of the input.
    std::set<std::string> in_ids, out_ids;
    for (const auto& t : app.tasks) in_ids.insert(t.task_id);
    for (const auto& t : sorted) out_ids.insert(t.task_id);
    CHECK(in_ids == out_ids);
    // Sortedness by adjacent-pair scan against oracle degrees.
    for (size_t i = 1; i < sorted.size(); ++i) {
      uint32_t prev = degrees.at(sorted[i - 1].task_id);
      uint32_t curr = degrees.at(sorted[i].task_id);
      bool ordered = prev > curr || (prev == curr && sorted[i - 1].task_id < sorted[i].task_id);
      CHECK(ordered);
    }
  }
}

TEST_CASE("transitive successor mode counts descendants") {
  auto chain = helpers::app("app1", {helpers::task("A", "app1"),
                                     helpers::task("B", "app1", {"A"}),
                                     helpers::task("C", "app1", {"B"})});
  auto index = build_graph_index(std::vector<ApplicationSpec>{chain},
                                 PriorityMode::transitive_successors);
  CHECK(index.successor_count.at("A") == 2);
  CHECK(index.successor_count.at("B") == 1);
  CHECK(index.successor_count.at("C") == 0);
}
