#include "doctest.h"
#include "fixtures.hpp"
#include "httplib.h"
#include "json.hpp"
#include "yp/http_server.hpp"
#include "yp/results.hpp"

using namespace yp;
using nlohmann::json;

namespace {

struct Live {
  std::unique_ptr<Engine> engine = fixture::sampleEngine();
  HttpServer server{*engine};
  int port = 0;
  Live() {
    port = server.bind("127.0.0.1", 0);
    server.start();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(10, 0);
    return c;
  }
};

}  // namespace

TEST_SUITE("http") {
  TEST_CASE("GET and POST /sparql") {
    Live live;
    auto c = live.client();
    std::string query = fixture::readText(fixture::dataPath("sample_query.rq"));
    auto get = c.Get("/sparql?query=" + httplib::detail::encode_query_param(query));
    REQUIRE(get);
    CHECK(get->status == 200);
    CHECK(get->get_header_value("Content-Type") == kSparqlResultsType);
    CHECK(get->get_header_value("Access-Control-Allow-Origin") == "*");
    CHECK(get->body == live.engine->sparql(query).body);
    REQUIRE(fromSparqlJson(get->body).rows.size() == 1);

    auto post = c.Post("/sparql", query, "application/sparql-query");
    REQUIRE(post);
    CHECK(post->status == 200);
    CHECK(post->body == get->body);

    auto form = c.Post("/sparql", httplib::Params{{"query", query}});
    REQUIRE(form);
    CHECK(form->body == get->body);

    auto wrongType = c.Post("/sparql", query, "text/plain");
    REQUIRE(wrongType);
    CHECK(wrongType->status == 415);

    auto empty = c.Get("/sparql?query=");
    REQUIRE(empty);
    CHECK(empty->status == 400);
    CHECK(json::parse(empty->body).contains("error"));

    auto missing = c.Get("/sparql");
    REQUIRE(missing);
    CHECK(missing->status == 400);

    std::string huge = "SELECT ?x WHERE { }" + std::string(kMaxQueryBytes, ' ');
    auto tooBig = c.Get("/sparql?query=" + httplib::detail::encode_query_param(huge));
    REQUIRE(tooBig);
    CHECK(tooBig->status == 413);
  }

  TEST_CASE("search, register and schema routes") {
    Live live;
    auto c = live.client();
    auto search = c.Post("/search", R"({"class":"Restaurant","filters":{"cost":{"max":20}}})", "application/json");
    REQUIRE(search);
    CHECK(search->status == 200);
    json body = json::parse(search->body);
    CHECK(body["results"][0]["penalty"] == 3.0);

    auto reg = c.Post("/register", R"({"class":"Restaurant","values":{"name":"Nandini","cost":15,"foodtype":"Veg"}})",
                      "application/json");
    REQUIRE(reg);
    CHECK(reg->status == 201);
    auto again = c.Post("/search", R"({"class":"Restaurant","filters":{"cost":{"max":20}}})", "application/json");
    REQUIRE(again);
    json after = json::parse(again->body);
    REQUIRE(after["results"].size() == 1);
    CHECK(after["results"][0]["bindings"]["name"]["value"] == "Nandini");
    CHECK(after["results"][0]["penalty"] == 0.0);

    auto garage = c.Post("/register", R"({"class":"Garage","values":{"name":"G"}})", "application/json");
    REQUIRE(garage);
    CHECK(garage->status == 404);

    auto schema = c.Get("/schema/Restaurant");
    REQUIRE(schema);
    CHECK(schema->status == 200);
    CHECK(json::parse(schema->body)["fields"].size() == 8);
    auto unknown = c.Get("/schema/Garage");
    REQUIRE(unknown);
    CHECK(unknown->status == 404);

    auto nowhere = c.Get("/nowhere");
    REQUIRE(nowhere);
    CHECK(nowhere->status == 404);
    CHECK(json::parse(nowhere->body).contains("error"));

    auto preflight = c.Options("/search");
    REQUIRE(preflight);
    CHECK(preflight->status == 204);
  }

  TEST_CASE("binding a taken port fails") {
    Live live;
    HttpServer second(*live.engine);
    CHECK_THROWS_AS(second.bind("127.0.0.1", live.port), Error);
  }
}
