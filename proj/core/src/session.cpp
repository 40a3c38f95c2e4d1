#include "gsql/session.hpp"

#include "gsql/parser.hpp"
#include "gsql/printer.hpp"

namespace gsql {

Session::Session()
    : catalog_(std::make_shared<const Catalog>()), graph_(std::make_unique<Graph>(catalog_)) {}

void Session::apply_ddl(const DdlStmt& stmt) {
  auto next = std::make_shared<const Catalog>(gsql::apply_ddl(stmt, *catalog_));
  if (graph_->num_vertices() > 0)
    fail(ErrorKind::Catalog, "schema changes after data is loaded are not supported");
  catalog_ = std::move(next);
  graph_ = std::make_unique<Graph>(catalog_);
}

std::vector<std::string> Session::install(std::string_view text) {
  Program p = parse_program(text);
  if (!p.ddl.empty()) fail(ErrorKind::Usage, "install expects queries only; use ddl for schema files");
  std::vector<std::string> names;
  for (auto& q : p.queries) {
    if (q->form != QueryForm::Create) fail(ErrorKind::Usage, "only named queries can be installed");
    std::string src = print_query(*q);
    std::string name = q->name;
    // Check now so errors surface at install time.
    check_query(std::move(q), check_env());
    sources_[name] = std::move(src);
    names.push_back(name);
  }
  return names;
}

std::vector<QueryResult> Session::run_source(std::string_view text, const EvalOptions& opts) {
  Program p = parse_program(text);
  for (const auto& stmt : p.ddl) apply_ddl(stmt);
  std::vector<QueryResult> results;
  for (auto& q : p.queries) {
    if (q->form != QueryForm::Create) {
      CheckedQuery c = check_query(std::move(q), check_env());
      results.push_back(run_query(*graph_, tables_, c, {}, opts));
      continue;
    }
    std::string src = print_query(*q);
    std::string name = q->name;
    check_query(std::move(q), check_env());
    sources_[name] = std::move(src);
  }
  return results;
}

bool Session::has_query(std::string_view name) const { return sources_.find(name) != sources_.end(); }

std::vector<std::string> Session::query_names() const {
  std::vector<std::string> out;
  for (const auto& [name, src] : sources_) out.push_back(name);
  return out;
}

std::unique_ptr<Query> Session::parsed(std::string_view name) const {
  auto it = sources_.find(name);
  if (it == sources_.end()) fail(ErrorKind::Usage, "no installed query '" + std::string(name) + "'");
  return parse_query(it->second);
}

LoadReport Session::load_edges(const std::string& path, std::string_view vtype, std::string_view etype) {
  return load_edge_tsv(*graph_, path, vtype, etype);
}

void Session::load_table(const std::string& path, const std::string& name) {
  tables_ = load_table_csv(tables_, path, name);
}

void Session::add_table(Table table) {
  if (tables_.contains(table.name)) fail(ErrorKind::Load, "table '" + table.name + "' already exists");
  std::string name = table.name;
  tables_ = tables_.override(name, Value(std::make_shared<const Table>(std::move(table))));
}

QueryResult Session::call(std::string_view name, const std::vector<Value>& args, const EvalOptions& opts) {
  CheckedQuery c = check_query(parsed(name), check_env());
  return run_query(*graph_, tables_, c, args, opts);
}

QueryResult Session::call_text(std::string_view name, const std::vector<std::string>& args,
                               const EvalOptions& opts) {
  std::unique_ptr<Query> q = parsed(name);
  if (args.size() != q->params.size())
    fail(ErrorKind::Usage, "query '" + q->name + "' expects " + std::to_string(q->params.size()) +
                               " arguments, got " + std::to_string(args.size()));
  std::vector<Value> values;
  for (std::size_t i = 0; i < args.size(); ++i) values.push_back(parse_argument(*graph_, q->params[i].type, args[i]));
  CheckedQuery c = check_query(std::move(q), check_env());
  return run_query(*graph_, tables_, c, values, opts);
}

void Session::set_default_graph(const std::string& name) {
  if (!name.empty() && !catalog_->find_graph(name)) fail(ErrorKind::Catalog, "unknown graph '" + name + "'");
  default_graph_ = name;
}

CheckEnv Session::check_env() const {
  CheckEnv env;
  env.catalog = catalog_;
  env.default_graph = default_graph_;
  for (const auto& [name, entry] : tables_.entries()) {
    const Value* v = std::get_if<Value>(&entry);
    if (v && v->is_table()) env.tables[name] = v->as_table().columns;
  }
  return env;
}

}  // namespace gsql
