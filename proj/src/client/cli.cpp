#include "itt/client/cli.hpp"

#include <termios.h>
#include <unistd.h>

#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "itt/client/api_client.hpp"
#include "itt/core/time.hpp"
#include "itt/core/validation.hpp"

namespace itt::client {
namespace {

using nlohmann::json;

struct Globals {
  std::string endpoint = "http://localhost:8081";
  std::string sso_endpoint;
  std::string token;
  std::string basic_id;
  std::string basic_secret;
  bool verbose = false;
};

std::string terminal_secret(const std::string& prompt, std::istream& in, std::ostream& err) {
  std::string line;
  if (::isatty(STDIN_FILENO) == 0) {
    std::getline(in, line);
    return line;
  }
  err << prompt << std::flush;
  termios saved{};
  ::tcgetattr(STDIN_FILENO, &saved);
  termios silent = saved;
  silent.c_lflag &= ~static_cast<tcflag_t>(ECHO);
  ::tcsetattr(STDIN_FILENO, TCSANOW, &silent);
  std::getline(in, line);
  ::tcsetattr(STDIN_FILENO, TCSANOW, &saved);
  err << '\n';
  return line;
}

class Commands {
 public:
  Commands(const Globals& globals, CliIo& io) : g_(globals), io_(io) {}

  ApiClient log_client(Credentials creds) const {
    return ApiClient{g_.endpoint, std::move(creds), g_.verbose ? &io_.err : nullptr};
  }
  ApiClient sso_client(Credentials creds) const {
    return ApiClient{g_.sso_endpoint.empty() ? g_.endpoint : g_.sso_endpoint, std::move(creds),
                     g_.verbose ? &io_.err : nullptr};
  }

  // nullopt (after printing why) when the flag or variable is missing.
  std::optional<Credentials> bearer() const {
    if (g_.token.empty()) {
      io_.err << "error: an access token is required (--token or ITT_TOKEN)\n";
      return std::nullopt;
    }
    return Credentials{g_.token, std::nullopt};
  }
  std::optional<Credentials> basic() const {
    if (g_.basic_id.empty() || g_.basic_secret.empty()) {
      io_.err << "error: monitor credentials are required (--basic-id/--basic-secret or "
                 "ITT_BASIC_ID/ITT_BASIC_SECRET)\n";
      return std::nullopt;
    }
    return Credentials{std::nullopt, std::pair{g_.basic_id, g_.basic_secret}};
  }

  // Prints the body (pretty JSON when possible) on success, the error otherwise.
  int finish(const ClientResponse& r) const {
    if (!r.ok()) {
      io_.err << "error: " << r.describe_error() << '\n';
      return exit_code_for(r);
    }
    if (!r.body.empty()) {
      auto doc = r.json();
      io_.out << (doc.is_discarded() ? r.body : doc.dump(2)) << '\n';
    }
    return kOk;
  }

  // Client-side check mirroring the server; returns the JSON to post.
  std::optional<json> prepare_entry(const LogSubmission& s) const {
    auto result = validate_log_submission(s, SystemClock{}.now());
    if (auto* errors = std::get_if<std::vector<FieldError>>(&result)) {
      for (const auto& e : *errors) io_.err << "invalid " << e.field << ": " << e.message << '\n';
      return std::nullopt;
    }
    const auto& d = std::get<LogDraft>(result);
    return json{{"occurred_at", format_timestamp(d.occurred_at)},
                {"owner", d.owner},
                {"consumer", d.consumer},
                {"tool", d.tool},
                {"data_category", d.data_category},
                {"purpose", d.purpose},
                {"access_kind", to_string(d.access_kind)}};
  }

  int emit(const LogSubmission& s) const {
    auto body = prepare_entry(s);
    if (!body) return kValidation;
    auto creds = basic();
    if (!creds) return kAuth;
    auto r = log_client(*creds).post("/api/v1/logs", *body);
    if (!r.ok()) return finish(r);
    auto doc = r.json();
    io_.out << "stored seq=" << doc.value("seq", 0) << " entry_id=" << doc.value("entry_id", "")
            << " policy_flag=" << doc.value("policy_flag", "none") << '\n';
    return kOk;
  }

  int import(const std::string& file, bool continue_on_error) const {
    std::ifstream in{file};
    if (!in) {
      io_.err << "error: cannot read " << file << '\n';
      return kValidation;
    }
    auto creds = basic();
    if (!creds) return kAuth;
    ApiClient client = log_client(*creds);
    long imported = 0;
    long failed = 0;
    int code = kOk;
    std::string line;
    for (long number = 1; std::getline(in, line); ++number) {
      if (trim(line).empty()) continue;
      int line_code = import_line(client, line, number);
      if (line_code == kOk) {
        ++imported;
        continue;
      }
      ++failed;
      code = line_code;
      // Auth and transport failures would repeat on every line.
      if (!continue_on_error || line_code != kValidation) break;
    }
    io_.out << "imported=" << imported << " failed=" << failed << '\n';
    return code;
  }

  int import_line(const ApiClient& client, const std::string& line, long number) const {
    auto doc = json::parse(line, nullptr, false);
    if (!doc.is_object()) {
      io_.err << "line " << number << ": not a JSON object\n";
      return kValidation;
    }
    LogSubmission s;
    auto field = [&](const char* key, std::string& out) {
      if (doc.contains(key) && doc[key].is_string()) out = doc[key].get<std::string>();
    };
    field("occurred_at", s.occurred_at);
    field("owner", s.owner);
    field("consumer", s.consumer);
    field("tool", s.tool);
    field("data_category", s.data_category);
    field("purpose", s.purpose);
    field("access_kind", s.access_kind);
    if (s.access_kind.empty()) s.access_kind = "read";
    auto body = prepare_entry(s);
    if (!body) {
      io_.err << "line " << number << ": rejected\n";
      return kValidation;
    }
    auto r = client.post("/api/v1/logs", *body);
    if (!r.ok()) {
      io_.err << "line " << number << ": " << r.describe_error() << '\n';
      return exit_code_for(r);
    }
    return kOk;
  }

 private:
  const Globals& g_;
  CliIo& io_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, CliIo io) {
  if (!io.read_secret) {
    io.read_secret = [&io](const std::string& prompt) {
      return terminal_secret(prompt, io.in, io.err);
    };
  }

  Globals g;
  CLI::App app{"itt: client for the usage-log and single sign-on services", "itt"};
  app.require_subcommand(1);
  app.add_option("--endpoint", g.endpoint, "Log service base URL")
      ->envname("ITT_ENDPOINT")
      ->capture_default_str();
  app.add_option("--sso-endpoint", g.sso_endpoint, "SSO service base URL (defaults to --endpoint)")
      ->envname("ITT_SSO_ENDPOINT");
  app.add_option("--token", g.token, "Bearer access token")->envname("ITT_TOKEN");
  app.add_option("--basic-id", g.basic_id, "Monitor client id")->envname("ITT_BASIC_ID");
  app.add_option("--basic-secret", g.basic_secret, "Monitor secret")->envname("ITT_BASIC_SECRET");
  app.add_flag("-v,--verbose", g.verbose, "Log requests to stderr (credentials redacted)");

  Commands cmd{g, io};
  int code = kOk;
  auto set = [&code](int c) { code = c; };

  // log
  auto* log = app.add_subcommand("log", "Record usages (monitor credentials)");
  log->require_subcommand(1);
  LogSubmission sub;
  sub.access_kind = "read";
  auto* emit = log->add_subcommand("emit", "Record one usage");
  emit->add_option("--owner", sub.owner, "Data owner (any registered identifier)");
  emit->add_option("--consumer", sub.consumer, "Data consumer (any registered identifier)");
  emit->add_option("--tool", sub.tool, "Reporting tool");
  emit->add_option("--category", sub.data_category, "Data category");
  emit->add_option("--purpose", sub.purpose, "Justification");
  emit->add_option("--access-kind", sub.access_kind, "read|aggregate|export|other")
      ->capture_default_str();
  emit->add_option("--occurred-at", sub.occurred_at, "RFC 3339 time of use (default: now)");
  emit->callback([&] {
    if (sub.occurred_at.empty()) sub.occurred_at = format_timestamp(SystemClock{}.now());
    set(cmd.emit(sub));
  });

  std::string import_file;
  bool continue_on_error = false;
  auto* import = log->add_subcommand("import", "Record usages from newline-delimited JSON");
  import->add_option("file", import_file, "NDJSON file, one entry per line")->required();
  import->add_flag("--continue-on-error", continue_on_error, "Keep going past invalid lines");
  import->callback([&] { set(cmd.import(import_file, continue_on_error)); });

  // user
  auto* user = app.add_subcommand("user", "Manage users (admin token)");
  user->require_subcommand(1);
  std::string main_id;
  std::vector<std::string> secondary;
  bool make_admin = false;
  auto* create = user->add_subcommand("create", "Register a user; prompts for the password");
  create->add_option("--main-id", main_id, "Main identifier")->required();
  create->add_option("--secondary", secondary, "Secondary identifier (repeatable)");
  create->add_flag("--admin", make_admin, "Grant administrator rights");
  create->callback([&] {
    auto creds = cmd.bearer();
    if (!creds) return set(kAuth);
    std::string password = io.read_secret("Password for " + main_id + ": ");
    json body = {{"main_id", main_id}, {"secondary_ids", secondary}, {"password", password},
                 {"is_admin", make_admin}};
    set(cmd.finish(cmd.sso_client(*creds).post("/api/v1/users", body)));
  });

  std::string target;
  bool clear_secondary = false;
  std::optional<bool> admin_flag;
  auto* update = user->add_subcommand("update", "Change identifiers or admin rights");
  update->add_option("main_id", target, "User to change")->required();
  update->add_option("--secondary", secondary, "Replacement secondary identifiers (repeatable)");
  update->add_flag("--clear-secondary", clear_secondary, "Remove all secondary identifiers");
  update->add_option("--admin", admin_flag, "true|false");
  update->callback([&] {
    auto creds = cmd.bearer();
    if (!creds) return set(kAuth);
    json body = json::object();
    if (!secondary.empty() || clear_secondary) body["secondary_ids"] = secondary;
    if (admin_flag) body["is_admin"] = *admin_flag;
    set(cmd.finish(
        cmd.sso_client(*creds).put("/api/v1/users/" + encode_path_segment(target), body)));
  });

  auto* remove = user->add_subcommand("delete", "Delete a user");
  remove->add_option("main_id", target, "User to delete")->required();
  remove->callback([&] {
    auto creds = cmd.bearer();
    if (!creds) return set(kAuth);
    set(cmd.finish(cmd.sso_client(*creds).del("/api/v1/users/" + encode_path_segment(target))));
  });

  // auth
  auto* auth = app.add_subcommand("auth", "Sessions");
  auth->require_subcommand(1);
  std::string identifier;
  auto* login = auth->add_subcommand("login", "Log in; prints the token pair as JSON");
  login->add_option("--identifier", identifier, "Any of your identifiers")->required();
  login->callback([&] {
    std::string password = io.read_secret("Password: ");
    set(cmd.finish(cmd.sso_client({}).post("/api/v1/login",
                                           {{"identifier", identifier}, {"password", password}})));
  });
  auto* logout = auth->add_subcommand("logout", "Revoke the current token pair");
  logout->callback([&] {
    auto creds = cmd.bearer();
    if (!creds) return set(kAuth);
    int c = cmd.finish(cmd.sso_client(*creds).post("/api/v1/logout", json::object()));
    if (c == kOk) io.out << "logged out\n";
    set(c);
  });

  // query
  auto* query = app.add_subcommand("query", "Read your usage log (access token)");
  query->require_subcommand(1);
  std::multimap<std::string, std::string> params;
  std::string from, to, consumer, tool, category, order;
  long page = 0, per_page = 0;
  auto* logs = query->add_subcommand("logs", "One page of usage entries as JSON");
  logs->add_option("--from", from, "Inclusive lower bound on occurred_at");
  logs->add_option("--to", to, "Exclusive upper bound on occurred_at");
  logs->add_option("--consumer", consumer);
  logs->add_option("--tool", tool);
  logs->add_option("--category", category);
  logs->add_option("--page", page);
  logs->add_option("--per-page", per_page);
  logs->add_option("--order", order, "occurred_at_desc|occurred_at_asc");
  logs->callback([&] {
    auto creds = cmd.bearer();
    if (!creds) return set(kAuth);
    auto put = [&](const char* key, const std::string& v) {
      if (!v.empty()) params.emplace(key, v);
    };
    put("from", from);
    put("to", to);
    put("consumer", consumer);
    put("tool", tool);
    put("data_category", category);
    put("order", order);
    if (page > 0) params.emplace("page", std::to_string(page));
    if (per_page > 0) params.emplace("per_page", std::to_string(per_page));
    set(cmd.finish(cmd.log_client(*creds).get("/api/v1/logs", params)));
  });

  int days = 7;
  auto* summary = query->add_subcommand("summary", "Trailing-window usage summary as JSON");
  summary->add_option("--days", days, "Window length")->capture_default_str();
  summary->callback([&] {
    auto creds = cmd.bearer();
    if (!creds) return set(kAuth);
    set(cmd.finish(
        cmd.log_client(*creds).get("/api/v1/logs/summary", {{"days", std::to_string(days)}})));
  });

  std::string out_file;
  auto* exporter = query->add_subcommand("export", "Printable HTML report for a range");
  exporter->add_option("--from", from, "Inclusive start (RFC 3339)")->required();
  exporter->add_option("--to", to, "Exclusive end (RFC 3339)")->required();
  exporter->add_option("--out", out_file, "Write the report here instead of stdout");
  exporter->callback([&] {
    auto creds = cmd.bearer();
    if (!creds) return set(kAuth);
    auto r = cmd.log_client(*creds).get("/api/v1/logs/export", {{"from", from}, {"to", to}});
    if (!r.ok()) return set(cmd.finish(r));
    if (out_file.empty()) {
      io.out << r.body;
    } else {
      std::ofstream file{out_file, std::ios::binary | std::ios::trunc};
      file << r.body;
      if (!file) {
        io.err << "error: cannot write " << out_file << '\n';
        return set(kValidation);
      }
      io.out << "wrote " << out_file << '\n';
    }
    set(kOk);
  });

  // policy
  auto* policy = app.add_subcommand("policy", "Your usage policies");
  policy->require_subcommand(1);
  std::string subject, effect, policy_id, owner;
  auto* pset = policy->add_subcommand("set", "Create or replace a rule (access token)");
  pset->add_option("--subject", subject, "Consumer identifier or *")->required();
  pset->add_option("--category", category, "Data category or *")->required();
  pset->add_option("--effect", effect, "allow|deny")->required();
  pset->callback([&] {
    auto creds = cmd.bearer();
    if (!creds) return set(kAuth);
    set(cmd.finish(cmd.log_client(*creds).post(
        "/api/v1/policies",
        {{"subject", subject}, {"data_category", category}, {"effect", effect}})));
  });
  auto* plist = policy->add_subcommand("list", "List your rules (access token)");
  plist->callback([&] {
    auto creds = cmd.bearer();
    if (!creds) return set(kAuth);
    set(cmd.finish(cmd.log_client(*creds).get("/api/v1/policies")));
  });
  auto* pdel = policy->add_subcommand("delete", "Delete a rule (access token)");
  pdel->add_option("policy_id", policy_id)->required();
  pdel->callback([&] {
    auto creds = cmd.bearer();
    if (!creds) return set(kAuth);
    int c = cmd.finish(
        cmd.log_client(*creds).del("/api/v1/policies/" + encode_path_segment(policy_id)));
    if (c == kOk) io.out << "deleted " << policy_id << '\n';
    set(c);
  });
  auto* peval = policy->add_subcommand("evaluate", "Pre-check a usage (monitor credentials)");
  peval->add_option("--owner", owner)->required();
  peval->add_option("--consumer", consumer)->required();
  peval->add_option("--category", category)->required();
  peval->callback([&] {
    auto creds = cmd.basic();
    if (!creds) return set(kAuth);
    set(cmd.finish(cmd.log_client(*creds).post(
        "/api/v1/policies/evaluate",
        {{"owner", owner}, {"consumer", consumer}, {"data_category", category}})));
  });

  // verify-chain
  auto* verify = app.add_subcommand("verify-chain", "Check log integrity (admin token); exit 1 when broken");
  verify->callback([&] {
    auto creds = cmd.bearer();
    if (!creds) return set(kAuth);
    auto r = cmd.log_client(*creds).get("/api/v1/logs/verify");
    int c = cmd.finish(r);
    if (c == kOk && !r.json().value("ok", false)) c = kValidation;
    set(c);
  });

  std::vector<std::string> argv_storage{"itt"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, io.out, io.err) == 0 ? kOk : kValidation;
  }
  return code;
}

}  // namespace itt::client
