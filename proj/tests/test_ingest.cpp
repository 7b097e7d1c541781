#include <doctest.h>

#include "helpers.hpp"
#include "synlens/error.hpp"
#include "synlens/fixtures.hpp"
#include "synlens/ingest.hpp"

using namespace synlens;

TEST_SUITE("ingest") {

TEST_CASE("csv: seed column maps to the seed flag") {
    const auto r = ingest::parse_csv("text,seed\n\"music for studying\",true\n\"sad songs\",false\n");
    REQUIRE(r.corpus.size() == 2);
    CHECK(r.corpus.source == SourceKind::Csv);
    CHECK(r.corpus.examples[0].text == "music for studying");
    CHECK(r.corpus.examples[0].seed);
    CHECK_FALSE(r.corpus.examples[1].seed);
    CHECK(r.corpus.examples[1].id == 1);
    CHECK(r.diagnostics.empty());
}

TEST_CASE("csv: embedding cell splits on semicolons") {
    const auto r = ingest::parse_csv("text,embedding\na,0.5;0.5;0.0\nb,1;0;0\n");
    REQUIRE(r.corpus.examples[0].embedding.has_value());
    CHECK(*r.corpus.examples[0].embedding == std::vector<double>{0.5, 0.5, 0.0});
}

TEST_CASE("csv: quoting, embedded newlines and CRLF") {
    const auto r = ingest::parse_csv("text,label\r\n\"a, \"\"quoted\"\"\nline\",x\r\nplain,y\r\n");
    REQUIRE(r.corpus.size() == 2);
    CHECK(r.corpus.examples[0].text == "a, \"quoted\"\nline");
    CHECK(r.corpus.examples[0].label == std::optional<std::string>("x"));
    CHECK(r.corpus.examples[1].text == "plain");
}

TEST_CASE("csv: a UTF-8 BOM before the header is ignored") {
    const auto r = ingest::parse_csv("\xEF\xBB\xBFtext\none\ntwo\n");
    CHECK(r.corpus.size() == 2);
}

TEST_CASE("csv: custom text column") {
    ingest::CsvColumns cols;
    cols.text = "query";
    const auto r = ingest::parse_csv("id,query\n1,hello there\n2,bye\n", cols);
    REQUIRE(r.corpus.size() == 2);
    CHECK(r.corpus.examples[0].text == "hello there");
}

TEST_CASE("csv: missing text column is a config error") {
    CHECK_THROWS_AS(ingest::parse_csv("body\nx\ny\n"), ConfigError);
}

TEST_CASE("csv: empty text rows are rejected, the rest survive") {
    const auto r = ingest::parse_csv("text\na\n\"  \"\nb\n");
    CHECK(r.corpus.size() == 2);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].severity == Diagnostic::Severity::Rejected);
    CHECK(r.diagnostics[0].location == 2);
    CHECK(format_diagnostic(r.diagnostics[0], "row").find("row 2") != std::string::npos);
}

TEST_CASE("csv: extra fields reject the row") {
    const auto r = ingest::parse_csv("text,seed\na,true\nb,false,extra\nc,false\n");
    CHECK(r.corpus.size() == 2);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].severity == Diagnostic::Severity::Rejected);
}

TEST_CASE("csv: a bad seed value warns and keeps the row") {
    const auto r = ingest::parse_csv("text,seed\na,maybe\nb,1\n");
    REQUIRE(r.corpus.size() == 2);
    CHECK_FALSE(r.corpus.examples[0].seed);
    CHECK(r.corpus.examples[1].seed);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].severity == Diagnostic::Severity::Warning);
}

TEST_CASE("csv: malformed embedding drops the field") {
    const auto r = ingest::parse_csv("text,embedding\na,0.1;x\nb,0.1;0.2\n");
    CHECK_FALSE(r.corpus.examples[0].embedding.has_value());
    CHECK(r.corpus.examples[1].embedding.has_value());
    CHECK(r.diagnostics.size() == 1);
}

TEST_CASE("csv: embedding dimension mismatch names both rows") {
    try {
        ingest::parse_csv("text,embedding\na,0.1;0.2\nb,0.1;0.2;0.3\n");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find('1') != std::string::npos);
        CHECK(msg.find('2') != std::string::npos);
    }
}

TEST_CASE("csv: fewer than two examples is a data error") {
    CHECK_THROWS_AS(ingest::parse_csv("text\nonly one\n"), DataError);
    CHECK_THROWS_AS(ingest::parse_csv(""), Error);
}

TEST_CASE("embedding cell parser") {
    std::vector<double> v;
    CHECK(ingest::parse_embedding_cell("1;-2.5;3e2", v));
    CHECK(v == std::vector<double>{1.0, -2.5, 300.0});
    CHECK_FALSE(ingest::parse_embedding_cell("1;;2", v));
    CHECK_FALSE(ingest::parse_embedding_cell("1;nan", v));
    CHECK_FALSE(ingest::parse_embedding_cell("", v));
}

TEST_CASE("conllu: heads are mapped to token indices") {
    const std::string doc =
        "# text = dogs bark\n"
        "1\tdogs\t_\tNOUN\t_\t_\t2\tnsubj\t_\t_\n"
        "2\tbark\t_\tVERB\t_\t_\t0\troot\t_\t_\n\n"
        "# text = cats\n"
        "1\tcats\t_\tNOUN\t_\t_\t0\troot\t_\t_\n";
    const auto r = ingest::parse_conllu(doc);
    REQUIRE(r.annotated.size() == 2);
    const auto& ex = r.annotated[0];
    CHECK(ex.has_dependencies);
    CHECK(ex.tokens[0].head == std::optional<std::size_t>(1));
    CHECK(ex.tokens[0].deprel == std::optional<std::string>("nsubj"));
    CHECK(ex.tokens[1].root);
    CHECK_FALSE(ex.tokens[1].head.has_value());
    CHECK(ex.tokens[0].pos == "NOUN");
    CHECK(r.corpus.source == SourceKind::Conllu);
}

TEST_CASE("conllu: one malformed sentence among three") {
    const std::string doc =
        "1\ta\t_\tNOUN\t_\t_\t0\troot\t_\t_\n\n"
        "1\tb\t_\tNOUN\t_\t_\t5\tnsubj\t_\t_\n"
        "2\tc\t_\tVERB\t_\t_\t0\troot\t_\t_\n\n"
        "1\td\t_\tNOUN\t_\t_\t0\troot\t_\t_\n";
    const auto r = ingest::parse_conllu(doc);
    CHECK(r.annotated.size() == 2);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].location == 2);
    CHECK(r.diagnostics[0].severity == Diagnostic::Severity::Rejected);
    CHECK(r.annotated[1].raw.id == 1);
    CHECK(r.annotated[1].tokens[0].surface == "d");
}

TEST_CASE("conllu: structural rejections") {
    const std::string good = "1\tok\t_\tNOUN\t_\t_\t0\troot\t_\t_\n\n1\tok2\t_\tNOUN\t_\t_\t0\troot\t_\t_\n\n";
    const std::vector<std::string> bad = {
        "1\ta\t_\tNOUN\t_\t_\t1\tdep\t_\t_\n",                                        // own head
        "1\ta\t_\tNOUN\t_\t_\t0\troot\t_\t_\n2\tb\t_\tNOUN\t_\t_\t0\troot\t_\t_\n",    // two roots
        "1\ta\t_\tNOUN\t_\t_\t0\troot\n",                                             // short line
        "2\ta\t_\tNOUN\t_\t_\t0\troot\t_\t_\n",                                       // id out of sequence
        "1\ta\t_\tNOUN\t_\t_\tx\troot\t_\t_\n",                                       // bad head
    };
    for (const auto& b : bad) {
        const auto r = ingest::parse_conllu(good + b);
        CHECK(r.annotated.size() == 2);
        REQUIRE(r.diagnostics.size() == 1);
        CHECK(r.diagnostics[0].severity == Diagnostic::Severity::Rejected);
    }
}

TEST_CASE("conllu: multiword ranges and empty nodes are skipped") {
    const std::string doc =
        "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tdo\t_\tAUX\t_\t_\t3\taux\t_\t_\n"
        "2\tn't\t_\tPART\t_\t_\t3\tneg\t_\t_\n"
        "3\tgo\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
        "3.1\tgone\t_\tVERB\t_\t_\t_\t_\t_\t_\n\n"
        "1\tok\t_\tINTJ\t_\t_\t0\troot\t_\t_\n";
    const auto r = ingest::parse_conllu(doc);
    REQUIRE(r.annotated.size() == 2);
    CHECK(r.annotated[0].tokens.size() == 3);
    CHECK(r.annotated[0].raw.text == "do n't go");
}

TEST_CASE("conllu: comments carry seed, label and embedding") {
    const std::string doc =
        "# text = hi there\n# seed = true\n# label = greet\n# embedding = 1;0\n"
        "1\thi\t_\tINTJ\t_\t_\t0\troot\t_\t_\n2\tthere\t_\tADV\t_\t_\t1\tadvmod\t_\t_\n\n"
        "# embedding = 0;1\n1\tbye\t_\tINTJ\t_\t_\t0\troot\t_\t_\n";
    const auto r = ingest::parse_conllu(doc);
    REQUIRE(r.annotated.size() == 2);
    const auto& raw = r.annotated[0].raw;
    CHECK(raw.text == "hi there");
    CHECK(raw.seed);
    CHECK(raw.label == std::optional<std::string>("greet"));
    CHECK(raw.embedding == std::optional<std::vector<double>>(std::vector<double>{1.0, 0.0}));
}

TEST_CASE("conllu: unknown tags are kept with a warning, missing tags become X") {
    const std::string doc =
        "1\ta\t_\tNN\t_\t_\t0\troot\t_\t_\n\n1\tb\t_\t_\t_\t_\t0\troot\t_\t_\n";
    const auto r = ingest::parse_conllu(doc);
    REQUIRE(r.annotated.size() == 2);
    CHECK(r.annotated[0].tokens[0].pos == "NN");
    CHECK(r.annotated[1].tokens[0].pos == "X");
    CHECK(r.diagnostics.size() == 2);
}

TEST_CASE("conllu: no dependency columns means no parse, not a failure") {
    const std::string doc = "1\ta\t_\tNOUN\t_\t_\t_\t_\t_\t_\n\n1\tb\t_\tNOUN\t_\t_\t_\t_\t_\t_\n";
    const auto r = ingest::parse_conllu(doc);
    REQUIRE(r.annotated.size() == 2);
    CHECK_FALSE(r.annotated[0].has_dependencies);
    CHECK(r.diagnostics.empty());
}

TEST_CASE("conllu: serialize then parse reproduces the annotations") {
    for (const auto* name : {"music.spec", "dialog.spec"}) {
        const auto fx = fixtures::generate_fixture(
            fixtures::parse_spec(test::slurp(test::source_dir() / "data" / "fixtures" / name)));
        const auto text = ingest::serialize_conllu(fx.examples);
        const auto back = ingest::parse_conllu(text);
        CHECK(back.diagnostics.empty());
        REQUIRE(back.annotated.size() == fx.examples.size());
        for (std::size_t i = 0; i < fx.examples.size(); ++i) {
            CHECK(back.annotated[i] == fx.examples[i]);
        }
        CHECK(ingest::serialize_conllu(back.annotated) == text);
    }
}

TEST_CASE("conllu: round trip keeps embeddings and unknown heads") {
    auto a = test::make_example(0, {"a", "b"}, {"NOUN", "VERB"});
    a.raw.embedding = std::vector<double>{0.25, -1.5};
    a.raw.label = "l";
    a.raw.seed = true;
    auto b = test::make_parsed(1, {"c", "d"}, {"NOUN", "NOUN"}, {"ROOT", "compound"});
    b.raw.embedding = std::vector<double>{0.1, 3.0};
    const auto back = ingest::parse_conllu(ingest::serialize_conllu({a, b}));
    REQUIRE(back.annotated.size() == 2);
    CHECK(back.annotated[0] == a);
    CHECK(back.annotated[1] == b);
}

TEST_CASE("the 500-row music fixture ingests as 500 examples without diagnostics") {
    const auto fx = fixtures::generate_fixture(
        fixtures::parse_spec(test::slurp(test::source_dir() / "data" / "fixtures" / "music.spec")));
    const auto r = ingest::parse_csv(fixtures::to_csv(fx.examples));
    CHECK(r.corpus.size() == 500);
    CHECK(r.diagnostics.empty());
    for (std::size_t i = 0; i < 500; ++i) {
        CHECK(r.corpus.examples[i].text == fx.examples[i].raw.text);
        CHECK(r.corpus.examples[i].seed == fx.examples[i].raw.seed);
    }
}

}
