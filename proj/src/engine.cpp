#include "yp/engine.hpp"

#include <cmath>
#include <set>

#include "json.hpp"
#include "yp/json_terms.hpp"
#include "yp/structured.hpp"

namespace yp {

using nlohmann::ordered_json;

namespace {

HttpResponse jsonResponse(int status, const ordered_json& body) {
  return HttpResponse{status, "application/json", body.dump()};
}

HttpResponse errorResponse(int status, const std::string& message) {
  ordered_json body;
  body["error"] = message;
  return jsonResponse(status, body);
}

ordered_json violationsJson(const std::vector<Violation>& vs) {
  ordered_json arr = ordered_json::array();
  for (const Violation& v : vs) arr.push_back({{"property", v.property}, {"message", v.message}});
  return arr;
}

// Maps library exceptions to status codes; every body carries "error".
HttpResponse fromException(std::exception_ptr ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const ParseError& e) {
    ordered_json body;
    body["error"] = e.what();
    body["line"] = e.line();
    body["column"] = e.column();
    return jsonResponse(400, body);
  } catch (const QueryRejected& e) {
    ordered_json body;
    body["error"] = e.what();
    body["violations"] = violationsJson(e.violations());
    return jsonResponse(422, body);
  } catch (const RecordRejected& e) {
    ordered_json body;
    body["error"] = e.what();
    body["violations"] = violationsJson(e.violations());
    return jsonResponse(422, body);
  } catch (const LocalityNotFound& e) {
    ordered_json body;
    body["error"] = e.what();
    body["suggestions"] = e.suggestions();
    return jsonResponse(422, body);
  } catch (const NotFoundError& e) {
    return errorResponse(404, e.what());
  } catch (const DuplicateRecord& e) {
    ordered_json body;
    body["error"] = e.what();
    body["iri"] = e.existingIri();
    return jsonResponse(409, body);
  } catch (const ValidationError& e) {
    return errorResponse(422, e.what());
  } catch (const ServiceUnavailable& e) {
    return errorResponse(503, e.what());
  } catch (const std::exception& e) {
    return errorResponse(500, e.what());
  }
}

std::string boundText(const std::string& name, const char* op, double v) {
  return name + " " + op + " " + formatDecimal(v);
}

// Human-readable outcome of one relaxation, e.g. "cost <= 25".
std::string relaxedText(const Constraint& c, const Relaxation& r, const PenaltyTable& t) {
  if (r.action == RelaxAction::Drop) return "dropped " + c.describe();
  if (c.kind == ConstraintKind::Spatial) {
    return "within " + formatDecimal(c.radiusKm * std::pow(t.radiusStepFactor, r.steps)) + " km";
  }
  std::string name = c.property.empty() ? c.var : c.property.substr(c.property.find_last_of("/#") + 1);
  bool between = c.op == BoundOp::Between;
  double lo = c.lower ? c.lower->numericValue() : 0.0;
  double hi = c.upper ? c.upper->numericValue() : 0.0;
  if (c.lower && (!between || c.widenLower)) lo = widenBound(lo, false, r.steps, t);
  if (c.upper && (!between || c.widenUpper)) hi = widenBound(hi, true, r.steps, t);
  if (c.op == BoundOp::Le) return boundText(name, "<=", hi);
  if (c.op == BoundOp::Ge) return boundText(name, ">=", lo);
  return name + " between " + formatDecimal(lo) + " and " + formatDecimal(hi);
}

}  // namespace

Engine::Engine(Schema schema, Gazetteer gazetteer, EngineOptions options)
    : schema_(std::move(schema)),
      gazetteer_(std::move(gazetteer)),
      options_(std::move(options)),
      registrar_(schema_) {
  validateEndpoints(options_.endpoints);
}

std::unique_ptr<Engine> Engine::fromConfig(const ServiceConfig& cfg) {
  auto load = [](const std::filesystem::path& p, const char* what) {
    try {
      return readFile(p);
    } catch (const ConfigError&) {
      throw ConfigError(std::string("cannot read ") + what + " file " + p.string());
    }
  };
  Schema schema;
  try {
    schema = loadSchema(load(cfg.schemaPath, "schema"));
  } catch (const SchemaError& e) {
    throw ConfigError(cfg.schemaPath.string() + ": " + e.what());
  }
  Gazetteer gazetteer;
  if (!cfg.gazetteerPath.empty()) {
    try {
      gazetteer = Gazetteer::parse(load(cfg.gazetteerPath, "gazetteer"));
    } catch (const ParseError& e) {
      throw ConfigError(cfg.gazetteerPath.string() + ": " + e.what());
    }
  }
  EngineOptions options;
  if (!cfg.penaltiesPath.empty()) {
    try {
      options.penalties = parsePenaltyTable(load(cfg.penaltiesPath, "penalties"));
    } catch (const ParseError& e) {
      throw ConfigError(cfg.penaltiesPath.string() + ": " + e.what());
    }
  }
  options.budget = cfg.budget;
  options.endpoints = cfg.endpoints;
  options.writerTimeout = std::chrono::milliseconds(cfg.writerTimeoutMs);
  if (cfg.persist) options.persistPath = cfg.dataPath;

  auto engine = std::make_unique<Engine>(std::move(schema), std::move(gazetteer), std::move(options));
  if (!cfg.dataPath.empty()) {
    std::string text = load(cfg.dataPath, "data");
    try {
      engine->loadNTriples(text);
    } catch (const ParseError& e) {
      throw ConfigError(cfg.dataPath.string() + ": " + e.what());
    }
  }
  return engine;
}

std::unique_lock<std::shared_timed_mutex> Engine::lockForWriting() {
  std::unique_lock lock(mu_, std::defer_lock);
  if (!lock.try_lock_for(options_.writerTimeout))
    throw ServiceUnavailable("store is busy; try again later");
  return lock;
}

std::shared_lock<std::shared_timed_mutex> Engine::readLock() {
  while (true) {
    {
      std::shared_lock lock(mu_);
      if (!geoStale_) return lock;
    }
    auto w = lockForWriting();
    if (geoStale_) {
      geo_ = buildIndex(store_, schema_);
      geoStale_ = false;
    }
  }
}

void Engine::persistLocked() {
  if (options_.persistPath) writeFileAtomic(*options_.persistPath, yp::exportNTriples(store_));
}

std::size_t Engine::loadNTriples(std::string_view text) {
  std::vector<Triple> parsed = parseNTriples(text);
  auto lock = lockForWriting();
  std::size_t n = 0;
  for (const Triple& t : parsed) n += store_.insert(t) ? 1 : 0;
  geoStale_ = true;
  return n;
}

std::string Engine::exportNTriples() {
  auto lock = readLock();
  return yp::exportNTriples(store_);
}

std::size_t Engine::size() {
  auto lock = readLock();
  return store_.size();
}

std::size_t Engine::entityCount() {
  auto lock = readLock();
  Term rdfType = Term::iri(std::string(vocab::kRdfType));
  std::set<Term> subjects;
  store_.scan(nullptr, &rdfType, nullptr, [&](const Triple& t) { subjects.insert(t.subject); });
  return subjects.size();
}

ResultSet Engine::execute(const QueryAst& q) {
  auto lock = readLock();
  return yp::execute(q, store_, geo_);
}

RelaxOutcome Engine::relax(const QueryAst& q, const RelaxBudget& budget) {
  auto lock = readLock();
  return relaxSearch(q, store_, geo_, budget, options_.penalties);
}

HttpResponse Engine::sparql(std::string_view queryText) {
  if (queryText.size() > kMaxQueryBytes)
    return errorResponse(413, "query exceeds " + std::to_string(kMaxQueryBytes) + " bytes");
  try {
    if (queryText.find_first_not_of(" \t\r\n") == std::string_view::npos)
      throw ParseError("empty query", 1, 1);
    QueryAst q = parseQuery(queryText);
    ResultSet rs = execute(q);
    return HttpResponse{200, std::string(kSparqlResultsType), toSparqlJson(rs)};
  } catch (...) {
    return fromException(std::current_exception());
  }
}

HttpResponse Engine::search(std::string_view body) {
  try {
    StructuredQuery sq = parseStructuredQuery(body, schema_);
    QueryAst q = structuredToAst(sq, schema_, gazetteer_);
    std::string text = printQuery(q);

    RelaxOutcome outcome;
    if (sq.relax) {
      RelaxBudget budget = options_.budget;
      budget.allLevels = budget.allLevels || sq.allLevels;
      outcome = relax(q, budget);
    } else {
      ResultSet rs = execute(q);
      outcome.vars = rs.vars;
      for (Row& row : rs.rows) outcome.results.push_back({std::move(row), 0.0, {}});
    }

    ordered_json federation;
    if (sq.federate && !options_.endpoints.empty()) {
      FederatedResult fr = fanout(text, options_.endpoints, sq.className);
      std::set<Row, decltype(&rowLess)> atZero(&rowLess);
      for (const RelaxedResult& r : outcome.results)
        if (r.applied.empty()) atZero.insert(r.row);
      bool remoteRows = false;
      for (Row& row : fr.merged.rows) {
        if (atZero.insert(row).second) {
          remoteRows = true;
          outcome.results.push_back({std::move(row), 0.0, {}});
        }
      }
      if (remoteRows) {
        // Exact answers now exist; relaxed ones only survive in all-levels mode.
        if (!sq.allLevels && !options_.budget.allLevels)
          std::erase_if(outcome.results, [](const RelaxedResult& r) { return !r.applied.empty(); });
        std::stable_sort(outcome.results.begin(), outcome.results.end(),
                         [](const RelaxedResult& a, const RelaxedResult& b) {
                           if (a.penalty != b.penalty) return a.penalty < b.penalty;
                           return rowLess(a.row, b.row);
                         });
      }
      federation["partial"] = fr.partial;
      federation["relaxation"] = "local store only";
      ordered_json eps = ordered_json::object();
      for (const auto& [name, st] : fr.perEndpoint) {
        ordered_json s;
        s["status"] = endpointStateName(st.state);
        s["rows"] = st.rows;
        if (st.httpStatus) s["httpStatus"] = st.httpStatus;
        if (!st.message.empty()) s["message"] = st.message;
        eps[name] = s;
      }
      federation["endpoints"] = eps;
    }

    ordered_json body;
    ordered_json results = ordered_json::array();
    for (const RelaxedResult& r : outcome.results) {
      ordered_json item;
      item["penalty"] = r.penalty;
      ordered_json rel = ordered_json::array();
      for (const Relaxation& x : r.applied) {
        const Constraint& c = outcome.constraints.at(x.constraint);
        ordered_json j;
        j["constraint"] = c.describe();
        j["action"] = x.action == RelaxAction::Drop ? "drop" : "widen";
        j["steps"] = x.steps;
        j["penalty"] = x.penalty;
        j["result"] = relaxedText(c, x, options_.penalties);
        rel.push_back(j);
      }
      item["relaxations"] = rel;
      item["bindings"] = rowToJson(outcome.vars, r.row);
      results.push_back(item);
    }
    body["results"] = results;
    body["exhausted"] = sq.relax && outcome.results.empty();
    body["vars"] = outcome.vars;
    body["sparql"] = text;
    body["statesExplored"] = outcome.statesExplored;
    if (!federation.is_null()) body["federation"] = federation;
    return jsonResponse(200, body);
  } catch (...) {
    return fromException(std::current_exception());
  }
}

HttpResponse Engine::registerRecord(std::string_view body) {
  try {
    RegisterRequest req = parseRegisterRequest(body);
    if (schema_.findClass(req.record.className) == nullptr)
      throw NotFoundError("unknown class '" + req.record.className + "'");
    auto violations = validateRecord(req.record, schema_);
    if (!violations.empty()) throw RecordRejected(std::move(violations));

    auto lock = lockForWriting();
    RegistrationReceipt receipt = req.iri ? registrar_.update(*req.iri, req.record, store_)
                                          : registrar_.registerRecord(req.record, store_);
    geoStale_ = true;
    persistLocked();
    lock.unlock();

    ordered_json out;
    out["iri"] = receipt.iri;
    out["version"] = receipt.version;
    out["createdAt"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(receipt.createdAt.time_since_epoch())
            .count();
    return jsonResponse(req.iri ? 200 : 201, out);
  } catch (...) {
    return fromException(std::current_exception());
  }
}

HttpResponse Engine::schemaForm(std::string_view className) {
  try {
    return HttpResponse{200, "application/json", formSpecJson(formSpec(className, schema_))};
  } catch (...) {
    return fromException(std::current_exception());
  }
}

}  // namespace yp
