#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "yp/executor.hpp"
#include "yp/query.hpp"
#include "yp/relax.hpp"
#include "yp/results.hpp"
#include "yp/structured.hpp"

using namespace yp;

namespace {

const std::string kShorthand = R"(PREFIX geo: <http://www.w3.org/2003/01/geo/wgs84_pos#>
PREFIX rest: <http://localhost:8080/>
PREFIX ext: <java:org.geospatialweb.arqext.>
SELECT ?name ?address
WHERE {
  ?restaurant ext:nearby (12.938147 77.609825 5) .
  ?restaurant rest:foodtype "Veg" ;
              rest:mealtype "Lunch" ;
              rest:address ?address ;
              rest:name ?name .
})";

ResultSet run(const std::string& text, const TripleStore& store) {
  Schema schema = fixture::restaurantSchema();
  return execute(parseQuery(text), store, buildIndex(store, schema));
}

std::string oneCol(const ResultSet& r, std::size_t row, std::size_t col = 0) {
  return r.rows.at(row).at(col)->value();
}

}  // namespace

TEST_SUITE("query") {
  TEST_CASE("sample query parses to one nearby and four patterns") {
    QueryAst q = parseQuery(fixture::readText(fixture::dataPath("sample_query.rq")));
    REQUIRE(q.select.size() == 2);
    CHECK(q.select[0].name == "name");
    CHECK(q.select[1].name == "address");
    REQUIRE(q.patterns.size() == 5);
    const auto& np = std::get<NearbyPattern>(q.patterns[0]);
    CHECK(np.entity.name == "restaurant");
    CHECK(np.lat == 12.938147);
    CHECK(np.lon == 77.609825);
    CHECK(np.radiusKm == 5.0);
    for (std::size_t i = 1; i < 5; ++i) {
      const auto& tp = std::get<TriplePattern>(q.patterns[i]);
      CHECK(std::get<Variable>(tp.subject).name == "restaurant");
    }
    CHECK(std::get<TriplePattern>(q.patterns[1]).object == PatternSlot{Term::string("Veg")});
    CHECK(q.filters.empty());
  }

  TEST_CASE("collection shorthand and first/rest chain give the same AST") {
    QueryAst chain = parseQuery(fixture::readText(fixture::dataPath("sample_query.rq")));
    QueryAst shorthand = parseQuery(kShorthand);
    CHECK(chain == shorthand);
  }

  TEST_CASE("small forms") {
    QueryAst empty = parseQuery("SELECT ?x WHERE { }");
    CHECK(empty.patterns.empty());
    QueryAst noWhere = parseQuery("SELECT ?s { ?s a <http://localhost:8080/Restaurant> }");
    REQUIRE(noWhere.patterns.size() == 1);
    CHECK(std::get<TriplePattern>(noWhere.patterns[0]).predicate ==
          PatternSlot{Term::iri(std::string(vocab::kRdfType))});
    QueryAst objects = parseQuery(
        "PREFIX r: <http://x.org/> SELECT ?s WHERE { ?s r:p \"a\", \"b\" ; r:q 1.5 . }");
    REQUIRE(objects.patterns.size() == 3);
    CHECK(std::get<TriplePattern>(objects.patterns[2]).object == PatternSlot{Term::decimal("1.5")});
    QueryAst filters = parseQuery(
        "PREFIX r: <http://x.org/> SELECT ?s WHERE { ?s r:cost ?c FILTER(?c >= 50 && ?c <= 100) }");
    REQUIRE(filters.filters.size() == 1);
    REQUIRE(filters.filters[0].conjuncts.size() == 2);
    CHECK(filters.filters[0].conjuncts[0].op == CompareOp::Ge);
    CHECK(filters.filters[0].conjuncts[0].constant == Term::integer(50));
    CHECK(filters.filters[0].conjuncts[1].op == CompareOp::Le);
  }

  TEST_CASE("parse errors carry line and column") {
    auto expectError = [](const std::string& text, std::size_t line) {
      try {
        parseQuery(text);
        FAIL("no error for: " << text);
      } catch (const ParseError& e) {
        CHECK(e.line() == line);
        CHECK(e.column() > 0);
      }
    };
    expectError("SELECT ?x WHERE {\n ?x ?p ?o .\n", 3);
    expectError("SELECT ?x WHERE {\n  ?x undeclared:p ?o }", 2);
    expectError("PREFIX ext: <java:org.geospatialweb.arqext.>\nSELECT ?x WHERE {\n ?x ext:nearby (1 2) }", 3);
    expectError("SELECT ?x WHERE { ?x <http://a/p> \"open }", 1);
    expectError("SELECT ?x WHERE { ?x <http://a/p> ?o } trailing", 1);
    expectError("SELECT WHERE { }", 1);
    expectError("SELECT ?x WHERE { ?x <http://a/p> ?o FILTER(?o ~ 3) }", 1);
  }

  TEST_CASE("nearby validation") {
    CHECK_THROWS_AS(parseQuery("SELECT ?x { ?x <java:org.geospatialweb.arqext.nearby> (95 10 1) }"),
                    ParseError);
    CHECK_THROWS_AS(parseQuery("SELECT ?x { ?x <java:org.geospatialweb.arqext.nearby> (10 10 0) }"),
                    ParseError);
    CHECK_THROWS_AS(parseQuery("SELECT ?x { ?x <java:org.geospatialweb.arqext.nearby> (10 \"a\" 1) }"),
                    ParseError);
  }

  TEST_CASE("print then parse is a fixpoint") {
    Schema schema = fixture::restaurantSchema();
    Gazetteer g = fixture::bangalore();
    std::mt19937_64 rng(99);
    QueryAst sample = parseQuery(fixture::readText(fixture::dataPath("sample_query.rq")));
    CHECK(parseQuery(printQuery(sample)) == sample);
    PenaltyTable table;
    for (int i = 0; i < 300; ++i) {
      QueryAst q = structuredToAst(fixture::randomStructured(rng), schema, g);
      CHECK(parseQuery(printQuery(q)) == q);
      auto cs = classifyConstraints(q);
      for (std::size_t c = 0; c < cs.size(); ++c) {
        RelaxAction action = cs[c].widenable() ? RelaxAction::Widen : RelaxAction::Drop;
        QueryAst r = applyRelaxation(q, cs, makeRelaxation(cs, c, action, 3, table), table);
        CHECK(parseQuery(printQuery(r)) == r);
      }
    }
    QueryAst tricky = parseQuery(
        "SELECT ?s WHERE { ?s <http://a/p> \"tab\\there \\\"q\\\"\"@en . _:b <http://a/q> -3 "
        "FILTER(?s != <http://a/x>) }");
    CHECK(parseQuery(printQuery(tricky)) == tricky);
  }

  TEST_CASE("executor on the three listed restaurants") {
    TripleStore store = fixture::sampleStore();
    ResultSet lunch = run(R"(PREFIX rest: <http://localhost:8080/>
      SELECT ?name WHERE { ?r rest:foodtype "Veg" . ?r rest:mealtype "Lunch" . ?r rest:name ?name })",
                          store);
    REQUIRE(lunch.rows.size() == 1);
    CHECK(oneCol(lunch, 0) == "Darshini");

    ResultSet sample = run(fixture::readText(fixture::dataPath("sample_query.rq")), store);
    REQUIRE(sample.rows.size() == 1);
    CHECK(oneCol(sample, 0, 0) == "Darshini");
    CHECK(oneCol(sample, 0, 1) == "17th Main, Koramangala, Bangalore");

    TripleStore empty;
    CHECK(run(kShorthand, empty).rows.empty());

    ResultSet cheap = run(R"(PREFIX rest: <http://localhost:8080/>
      SELECT ?name ?cost WHERE { ?r rest:name ?name ; rest:cost ?cost FILTER(?cost < 60) })",
                          store);
    REQUIRE(cheap.rows.size() == 2);
    CHECK(oneCol(cheap, 0) == "Kamat");
    CHECK(oneCol(cheap, 1) == "Upahar");
  }

  TEST_CASE("filter type errors and unbound variables drop rows") {
    TripleStore store = fixture::sampleStore();
    CHECK(run(R"(PREFIX rest: <http://localhost:8080/>
      SELECT ?name WHERE { ?r rest:name ?name FILTER(?name < 10) })",
              store)
              .rows.empty());
    CHECK(run(R"(PREFIX rest: <http://localhost:8080/>
      SELECT ?name WHERE { ?r rest:name ?name FILTER(?missing = 1) })",
              store)
              .rows.empty());
    CHECK(evalComparison(Term::integer(5), CompareOp::Lt, Term::decimal("5.5")) == true);
    CHECK(evalComparison(Term::string("a"), CompareOp::Lt, Term::string("b")) == true);
    CHECK(evalComparison(Term::string("a"), CompareOp::Lt, Term::integer(1)) == std::nullopt);
    CHECK(evalComparison(Term::iri("http://a/x"), CompareOp::Eq, Term::iri("http://a/x")) == true);
    CHECK(evalComparison(Term::iri("http://a/x"), CompareOp::Lt, Term::iri("http://a/y")) == std::nullopt);
    CHECK(evalComparison(Term::integer(INT64_MAX), CompareOp::Gt, Term::integer(INT64_MAX - 1)) == true);
  }

  TEST_CASE("projection of an unmatched variable stays unbound") {
    TripleStore store = fixture::sampleStore();
    ResultSet r = run(R"(PREFIX rest: <http://localhost:8080/>
      SELECT ?name ?nothing WHERE { ?r rest:name ?name })",
                      store);
    REQUIRE(r.rows.size() == 3);
    CHECK_FALSE(r.rows[0][1].has_value());
  }

  TEST_CASE("executor equals the nested-loop evaluator") {
    Schema schema = fixture::restaurantSchema();
    Gazetteer g = fixture::bangalore();
    TripleStore store = fixture::randomStore(17, 150, schema);
    GeoIndex geo = buildIndex(store, schema);
    auto triples = store.triples();
    auto positions = oracle::positionsOf(triples, schema.latIri().value(), schema.longIri().value());
    std::mt19937_64 rng(17);
    for (int i = 0; i < 60; ++i) {
      QueryAst q = structuredToAst(fixture::randomStructured(rng), schema, g);
      CHECK(execute(q, store, geo) == oracle::bruteForceExecute(q, triples, positions));
    }
  }

  TEST_CASE("adding a filter never adds rows") {
    Schema schema = fixture::restaurantSchema();
    Gazetteer g = fixture::bangalore();
    TripleStore store = fixture::randomStore(23, 200, schema);
    GeoIndex geo = buildIndex(store, schema);
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> cost(10, 400);
    for (int i = 0; i < 50; ++i) {
      QueryAst q = structuredToAst(fixture::randomStructured(rng), schema, g);
      q.patterns.push_back(TriplePattern{Variable{"restaurant"}, schema.propertyIri("cost"), Variable{"zcost"}});
      ResultSet before = execute(q, store, geo);
      q.filters.push_back(FilterExpr{{Comparison{Variable{"zcost"}, CompareOp::Le, Term::integer(cost(rng))}}});
      ResultSet after = execute(q, store, geo);
      CHECK(after.rows.size() <= before.rows.size());
      for (const Row& row : after.rows)
        CHECK(std::binary_search(before.rows.begin(), before.rows.end(), row, rowLess));
    }
  }

  TEST_CASE("SPARQL JSON results") {
    CHECK(toSparqlJson(ResultSet{}) == R"({"head":{"vars":[]},"results":{"bindings":[]}})");
    ResultSet one{{"name"}, {{Term::string("Darshini")}}};
    CHECK(toSparqlJson(one) ==
          R"({"head":{"vars":["name"]},"results":{"bindings":[{"name":{"type":"literal","value":"Darshini"}}]}})");
    ResultSet typed{{"cost", "r", "b", "l"},
                    {{Term::integer(100), Term::iri("http://a/x"), Term::blank("n1"), Term::string("x", "en")}}};
    auto j = nlohmann::json::parse(toSparqlJson(typed));
    auto b = j["results"]["bindings"][0];
    CHECK(b["cost"]["datatype"] == "http://www.w3.org/2001/XMLSchema#integer");
    CHECK(b["r"]["type"] == "uri");
    CHECK(b["b"]["type"] == "bnode");
    CHECK(b["l"]["xml:lang"] == "en");
    CHECK(fromSparqlJson(toSparqlJson(typed)) == typed);
    ResultSet gap{{"a", "b"}, {{Term::string("x"), std::nullopt}}};
    CHECK(fromSparqlJson(toSparqlJson(gap)) == gap);
    CHECK_THROWS_AS(fromSparqlJson("{}"), ParseError);
    CHECK_THROWS_AS(fromSparqlJson("not json"), ParseError);
  }

  TEST_CASE("rows sort by first variable, unbound first") {
    ResultSet r{{"a"}, {{Term::string("b")}, {std::nullopt}, {Term::string("a")}, {Term::string("b")}}};
    canonicalize(r);
    REQUIRE(r.rows.size() == 3);
    CHECK_FALSE(r.rows[0][0].has_value());
    CHECK(r.rows[1][0] == Term::string("a"));
  }
}
