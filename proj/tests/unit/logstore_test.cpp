#include <gtest/gtest.h>

#include <thread>

#include "fixtures.hpp"
#include "itt/core/error.hpp"
#include "itt/logstore/report.hpp"
#include "oracles.hpp"

using namespace itt;
using namespace itt::logstore;
using fixture::at;
using fixture::kEpoch;

namespace {

std::vector<UsageLogEntry> all_entries(const LogStore& store) {
  LogQuery q;
  std::vector<UsageLogEntry> out;
  for (int o = 0; o < 10; ++o) {
    q.owner = "owner" + std::to_string(o);
    q.per_page = kMaxPerPage;
    for (q.page = 1;; ++q.page) {
      auto page = store.query(q);
      out.insert(out.end(), page.entries.begin(), page.entries.end());
      if (page.entries.size() < static_cast<std::size_t>(q.per_page)) break;
    }
  }
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.seq < b.seq; });
  return out;
}

}  // namespace

TEST(LogStore, AppendAssignsSequenceAndChain) {
  fixture::Stack s;
  auto a = s.logs.append(fixture::draft("alice", "bob", "t", "hr", kEpoch - 10), Effect::Allow);
  s.clock.advance(std::chrono::seconds{5});
  auto b = s.logs.append(fixture::draft("alice", "eve", "t", "hr", kEpoch - 5), Effect::Deny);
  EXPECT_EQ(a.seq, 1);
  EXPECT_EQ(b.seq, 2);
  EXPECT_EQ(a.recorded_at, at(kEpoch));
  EXPECT_EQ(b.recorded_at, at(kEpoch + 5));
  EXPECT_EQ(a.policy_flag, PolicyFlag::None);
  EXPECT_EQ(b.policy_flag, PolicyFlag::Violation);
  EXPECT_NE(a.entry_id, b.entry_id);
  auto expected = oracle::chain({a, b});
  EXPECT_EQ(a.chain_hash, expected[0]);
  EXPECT_EQ(b.chain_hash, expected[1]);
  EXPECT_EQ(s.logs.head().head_seq, 2);
  EXPECT_EQ(s.logs.head().head_hash, b.chain_hash);
}

TEST(LogStore, QueryMatchesOracle) {
  fixture::Stack s;
  std::mt19937_64 rng{101};
  for (const auto& d : fixture::random_drafts(rng, 300, 10)) s.logs.append(d, Effect::Allow);
  auto all = all_entries(s.logs);
  ASSERT_EQ(all.size(), 300u);

  std::uniform_int_distribution<int> owner(0, 9), coin(0, 2), small(0, 4), page(1, 4),
      per(1, 30);
  std::uniform_int_distribution<long long> when(kEpoch - 31 * 86400LL, kEpoch);
  for (int i = 0; i < 200; ++i) {
    LogQuery q;
    q.owner = "owner" + std::to_string(owner(rng));
    if (coin(rng) == 0) q.consumer = "consumer" + std::to_string(small(rng));
    if (coin(rng) == 0) q.tool = "tool" + std::to_string(small(rng));
    if (coin(rng) == 0) q.data_category = "category" + std::to_string(small(rng));
    if (coin(rng) == 0) {
      auto a = when(rng), b = when(rng);
      if (a == b) ++b;
      q.from = at(std::min(a, b));
      q.to = at(std::max(a, b));
    }
    q.page = page(rng);
    q.per_page = per(rng);
    q.order = coin(rng) == 0 ? SortOrder::OccurredAsc : SortOrder::OccurredDesc;
    auto got = s.logs.query(q);
    auto want = oracle::query(all, q);
    std::vector<std::int64_t> seqs;
    for (const auto& e : got.entries) seqs.push_back(e.seq);
    EXPECT_EQ(seqs, want.seqs);
    EXPECT_EQ(got.total_count, want.total);
  }
}

TEST(LogStore, QueryValidation) {
  fixture::Stack s;
  LogQuery q;
  q.owner = "a";
  q.from = at(10);
  q.to = at(10);
  try {
    s.logs.query(q);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_range);
  }
  q.to = at(11);
  q.per_page = kMaxPerPage + 1;
  EXPECT_THROW(s.logs.query(q), Error);
  q.per_page = 0;
  EXPECT_THROW(s.logs.query(q), Error);
  q.per_page = 10;
  q.page = 0;
  EXPECT_THROW(s.logs.query(q), Error);
  q.page = 1;
  EXPECT_EQ(s.logs.query(q).total_count, 0);
}

TEST(LogStore, SummaryMatchesOracle) {
  fixture::Stack s;
  std::mt19937_64 rng{202};
  for (const auto& d : fixture::random_drafts(rng, 400, 3, 20 * 86400LL)) {
    s.logs.append(d, Effect::Allow);
  }
  auto all = all_entries(s.logs);
  std::uniform_int_distribution<long long> now(kEpoch - 25 * 86400LL, kEpoch + 86400);
  std::uniform_int_distribution<int> days(1, 10);
  for (int i = 0; i < 60; ++i) {
    long long t = now(rng);
    int d = days(rng);
    auto got = s.logs.summarize("owner1", at(t), d);
    auto want = oracle::summary(all, "owner1", t, d);
    EXPECT_EQ(got.total, want.total);
    EXPECT_EQ(got.by_consumer, want.by_consumer);
    EXPECT_EQ(got.by_tool, want.by_tool);
    ASSERT_EQ(got.by_day.size(), want.by_day.size());
    for (std::size_t k = 0; k < got.by_day.size(); ++k) {
      EXPECT_EQ(got.by_day[k].day, want.by_day[k].first);
      EXPECT_EQ(got.by_day[k].count, want.by_day[k].second);
    }
    EXPECT_EQ(got.window_end, at(t));
    EXPECT_EQ(got.window_start, at(t - d * 86400LL));
  }
}

TEST(LogStore, SummaryHalfOpenEdges) {
  fixture::Stack s;
  s.logs.append(fixture::draft("a", "c", "t", "x", kEpoch - 7 * 86400), Effect::Allow);
  s.logs.append(fixture::draft("a", "c", "t", "x", kEpoch), Effect::Allow);
  auto sum = s.logs.summarize("a", at(kEpoch), 7);
  EXPECT_EQ(sum.total, 1);
  EXPECT_EQ(sum.by_day.size(), 7u);
  EXPECT_EQ(s.logs.summarize("nobody", at(kEpoch)).total, 0);
  EXPECT_THROW(s.logs.summarize("a", at(kEpoch), 0), Error);
}

TEST(LogStore, VerifyDetectsSqliteTamper) {
  fixture::TempDir dir;
  auto path = dir.file("log.db");
  fixture::Stack s{path};
  std::mt19937_64 rng{303};
  for (const auto& d : fixture::random_drafts(rng, 40, 2)) s.logs.append(d, Effect::Allow);
  ASSERT_TRUE(s.logs.verify_chain().ok);
  EXPECT_EQ(s.logs.verify_chain().checked, 40);

  const char* columns[] = {"entry_id", "owner", "consumer", "tool", "data_category", "purpose"};
  for (int i = 0; i < 12; ++i) {
    std::int64_t seq = 1 + (i * 7) % 40;
    std::string column = columns[i % 6];
    std::string original;
    s.db->read([&](storage::Connection& c) {
      auto st = c.prepare("SELECT " + column + " FROM entries WHERE seq = ?");
      st.bind(1, seq);
      ASSERT_TRUE(st.step());
      original = st.text(0);
    });
    std::string mutated = original.empty() ? "x" : original;
    mutated[0] = static_cast<char>(mutated[0] ^ 0x01);
    auto set = [&](const std::string& v) {
      s.db->write([&](storage::Connection& c) {
        auto st = c.prepare("UPDATE entries SET " + column + " = ? WHERE seq = ?");
        st.bind(1, v).bind(2, seq);
        st.run();
      });
    };
    set(mutated);
    auto result = s.logs.verify_chain();
    EXPECT_FALSE(result.ok);
    EXPECT_EQ(result.first_bad_seq, seq) << column;
    EXPECT_NE(result.expected_hash, result.found_hash);
    set(original);
    EXPECT_TRUE(s.logs.verify_chain().ok);
  }
}

TEST(LogStore, VerifyDetectsDeletedRowAndTruncation) {
  fixture::Stack s;
  for (int i = 0; i < 5; ++i) {
    s.logs.append(fixture::draft("a", "c", "t", "x", kEpoch - 100 + i), Effect::Allow);
  }
  s.db->write([](storage::Connection& c) { c.exec("DELETE FROM entries WHERE seq = 3"); });
  auto gap = s.logs.verify_chain();
  EXPECT_FALSE(gap.ok);
  EXPECT_EQ(gap.first_bad_seq, 3);

  fixture::Stack t;
  for (int i = 0; i < 5; ++i) {
    t.logs.append(fixture::draft("a", "c", "t", "x", kEpoch - 100 + i), Effect::Allow);
  }
  t.db->write([](storage::Connection& c) { c.exec("DELETE FROM entries WHERE seq = 5"); });
  auto truncated = t.logs.verify_chain();
  EXPECT_FALSE(truncated.ok);
  EXPECT_EQ(truncated.first_bad_seq, 5);
}

TEST(LogStore, MemoryBackendTamper) {
  ManualClock clock{at(kEpoch)};
  auto backend = std::make_unique<MemoryLogBackend>();
  auto* raw = backend.get();
  LogStore store{std::move(backend), clock};
  for (int i = 0; i < 10; ++i) {
    store.append(fixture::draft("a", "c", "t", "x", kEpoch - 100 + i), Effect::Allow);
  }
  EXPECT_TRUE(store.verify_chain().ok);
  raw->tamper(6, [](UsageLogEntry& e) { e.purpose += "!"; });
  auto r = store.verify_chain();
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.first_bad_seq, 6);
}

TEST(LogStore, ConcurrentAppendsKeepAGaplessChain) {
  fixture::TempDir dir;
  fixture::Stack s{dir.file("c.db")};
  std::vector<std::thread> writers;
  for (int w = 0; w < 4; ++w) {
    writers.emplace_back([&s, w] {
      for (int i = 0; i < 50; ++i) {
        s.logs.append(fixture::draft("owner" + std::to_string(w), "c", "t", "x", kEpoch - i),
                      Effect::Allow);
      }
    });
  }
  for (auto& t : writers) t.join();
  auto r = s.logs.verify_chain();
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.checked, 200);
  EXPECT_EQ(s.logs.head().head_seq, 200);
}

TEST(LogStore, PersistsAcrossReopen) {
  fixture::TempDir dir;
  auto path = dir.file("p.db");
  {
    fixture::Stack s{path};
    s.logs.append(fixture::draft("a", "c", "t", "x", kEpoch - 1), Effect::Allow);
  }
  fixture::Stack s{path};
  EXPECT_EQ(s.logs.head().head_seq, 1);
  EXPECT_TRUE(s.logs.verify_chain().ok);
  EXPECT_EQ(s.db->schema_version(), storage::Database::kSchemaVersion);
}

TEST(Report, DeterministicAndEscaped) {
  fixture::Stack s;
  s.logs.append(fixture::draft("al<ice>", "b&b", "t\"", "x", kEpoch - 50), Effect::Deny);
  s.logs.append(fixture::draft("al<ice>", "c", "t", "y", kEpoch - 40), Effect::Allow);
  auto a = s.logs.export_report("al<ice>", at(kEpoch - 100), at(kEpoch));
  auto b = s.logs.export_report("al<ice>", at(kEpoch - 100), at(kEpoch));
  EXPECT_EQ(a.body, b.body);
  EXPECT_EQ(a.media_type, "text/html; charset=utf-8");
  EXPECT_EQ(a.body.find("<ice>"), std::string::npos);
  EXPECT_NE(a.body.find("al&lt;ice&gt;"), std::string::npos);
  EXPECT_NE(a.body.find("b&amp;b"), std::string::npos);
  EXPECT_EQ(a.body.find("<script"), std::string::npos);
  EXPECT_EQ(a.body.find("http"), std::string::npos);
  EXPECT_NE(a.body.find("id=\"total\">2<"), std::string::npos);
  EXPECT_EQ(a.filename.find('<'), std::string::npos);
  EXPECT_THROW(s.logs.export_report("a", at(kEpoch), at(kEpoch)), Error);
  EXPECT_EQ(html_escape("<'\"&>"), "&lt;&#39;&quot;&amp;&gt;");
}
