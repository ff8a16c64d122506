#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mifdcop/error.hpp"
#include "mifdcop/model/problem.hpp"
#include "mifdcop/model/problem_io.hpp"
#include "support/fixtures.hpp"

using namespace mifdcop;
using fixtures::close_rel;

namespace {

Problem two_var_table() {
    // f(x1, x2): (0,0)=5 (0,1)=2 (1,0)=7 (1,1)=1
    return Problem({Domain::integer_range(0, 1), Domain::integer_range(0, 1)},
                   {Constraint::table({0, 1}, {5, 2, 7, 1})});
}

std::string what_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Domain, RejectsInvalidDefinitions) {
    EXPECT_THROW(Domain::discrete({}), ValidationError);
    EXPECT_THROW(Domain::discrete({1, 2, 1}), ValidationError);
    EXPECT_THROW(Domain::discrete({1, NAN}), ValidationError);
    EXPECT_THROW(Domain::continuous(1, 1), ValidationError);
    EXPECT_THROW(Domain::continuous(0, INFINITY), ValidationError);
    EXPECT_THROW(Domain::continuous(2, 1), ValidationError);
}

TEST(Domain, MembershipAndPositions) {
    Domain d = Domain::discrete({4, -1, 2.5});
    EXPECT_TRUE(d.contains(2.5));
    EXPECT_FALSE(d.contains(3));
    EXPECT_EQ(d.position_of(-1), 1u);
    EXPECT_FALSE(d.position_of(0).has_value());
    Domain c = Domain::continuous(-50, 50);
    EXPECT_TRUE(c.contains(-50));
    EXPECT_TRUE(c.contains(50));
    EXPECT_FALSE(c.contains(50.0001));
}

TEST(EvaluateGlobal, TableLookup) {
    EXPECT_EQ(evaluate_global(two_var_table(), Assignment{{0, 1}}), 2);
}

TEST(EvaluateGlobal, QuadraticSymmetry) {
    Expression x = Expression::variable(0), y = Expression::variable(1);
    Problem p({Domain::continuous(-5, 5), Domain::continuous(-5, 5)},
              {Constraint::function({0, 1}, pow(x, 2) + Expression::constant(2) * x * y + pow(y, 2))});
    EXPECT_EQ(evaluate_global(p, Assignment{{3, -3}}), 0);
}

TEST(EvaluateGlobal, MatchesIndependentResum) {
    std::mt19937_64 rng(11);
    // 5 variables, 6 constraints: a spanning path plus two chords.
    std::vector<Constraint> cs;
    const std::vector<std::pair<VariableId, VariableId>> edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {1, 3}};
    std::uniform_int_distribution<int> cost(0, 50);
    for (auto [a, b] : edges) {
        std::vector<double> t(9);
        for (double& c : t) c = cost(rng);
        cs.push_back(Constraint::table({a, b}, t));
    }
    Problem p(std::vector<Domain>(5, Domain::integer_range(0, 2)), cs);
    ASSERT_EQ(p.constraints().size(), 6u);
    for (int trial = 0; trial < 50; ++trial) {
        Assignment a = fixtures::random_assignment(p, rng);
        EXPECT_EQ(evaluate_global(p, a), fixtures::resum(p, a));
    }
}

TEST(EvaluateGlobal, ErrorNamesTheVariable) {
    const std::string msg = what_of([] { evaluate_global(two_var_table(), Assignment{{0, 3}}); });
    EXPECT_NE(msg.find("x_1"), std::string::npos) << msg;
    EXPECT_THROW(evaluate_global(two_var_table(), Assignment{{0}}), ValidationError);
}

TEST(EvaluateGlobal, EachConstraintCountedOnce) {
    std::vector<Constraint> cs;
    int count = 0;
    for (VariableId a = 0; a < 6; ++a) {
        for (VariableId b = a + 1; b < 6; b += 2) {
            cs.push_back(Constraint::table({a, b}, std::vector<double>(4, 1.0)));
            ++count;
        }
    }
    Problem p(std::vector<Domain>(6, Domain::integer_range(0, 1)), cs);
    EXPECT_EQ(evaluate_global(p, Assignment{std::vector<double>(6, 1.0)}), count);
}

TEST(LocalCost, UnconstrainedVariableIsZero) {
    Problem p({Domain::integer_range(0, 3)}, {});
    EXPECT_EQ(local_cost(p, 0, 2, {}), 0);
}

TEST(LocalCost, ProductConstraint) {
    Problem p({Domain::continuous(-5, 5), Domain::continuous(-5, 5)},
              {Constraint::function({0, 1}, Expression::variable(0) * Expression::variable(1))});
    EXPECT_EQ(local_cost(p, 0, 2, {{1, 3}}), 6);
}

TEST(LocalCost, StarCenterSumsItsTables) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> cost(0, 99);
    std::vector<Constraint> cs;
    for (VariableId leaf = 0; leaf < 4; ++leaf) {
        std::vector<double> t(9);
        for (double& c : t) c = cost(rng);
        cs.push_back(Constraint::table({4, leaf}, t));
    }
    // A leaf-leaf constraint that must not count towards the center.
    cs.push_back(Constraint::table({0, 1}, std::vector<double>(9, 1000.0)));
    Problem p(std::vector<Domain>(5, Domain::integer_range(0, 2)), cs);
    for (int trial = 0; trial < 20; ++trial) {
        Assignment a = fixtures::random_assignment(p, rng);
        double expected = 0;
        for (int i = 0; i < 4; ++i) expected += fixtures::table_lookup(p, p.constraints()[i], a);
        EXPECT_EQ(local_cost(p, 4, a[4], fixtures::neighbor_map(p, 4, a)), expected);
    }
}

TEST(LocalCost, MissingNeighborIsNamed) {
    Problem p = fixtures::random_table_problem(4, 1.0, 2, 1);
    const std::string msg = what_of([&] { local_cost(p, 0, 0, {{1, 0}, {2, 0}}); });
    EXPECT_NE(msg.find("x_3"), std::string::npos) << msg;
}

TEST(LocalGain, IdentityIsZero) {
    Problem p = fixtures::random_table_problem(5, 0.5, 3, 9);
    Assignment a{{0, 1, 2, 0, 1}};
    EXPECT_EQ(local_gain(p, 2, a[2], a[2], fixtures::neighbor_map(p, 2, a)), 0);
}

TEST(LocalGain, ImprovementIsPositive) {
    Problem p({Domain::integer_range(0, 1)}, {Constraint::table({0}, {10, 7})});
    EXPECT_EQ(local_gain(p, 0, 0, 1, {}), 3);
}

TEST(LocalGain, EqualsGlobalDifferenceOnSingleFlips) {
    std::mt19937_64 rng(42);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Problem p = fixtures::random_table_problem(8, 0.4, 4, seed);
        Assignment a = fixtures::random_assignment(p, rng);
        for (int flip = 0; flip < 20; ++flip) {
            VariableId v = std::uniform_int_distribution<VariableId>(0, 7)(rng);
            Assignment b = a;
            b[v] = std::uniform_int_distribution<int>(0, 3)(rng);
            const double gain = local_gain(p, v, a[v], b[v], fixtures::neighbor_map(p, v, a));
            EXPECT_EQ(gain, evaluate_global(p, a) - evaluate_global(p, b));
            a = b;
        }
    }
}

// Property: random single-variable flips on mixed table/functional problems.
TEST(LocalGain, SingleFlipConsistencyProperty) {
    std::mt19937_64 rng(7);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Problem p = (seed % 2) ? fixtures::random_quadratic_problem(7, 0.3, seed)
                               : fixtures::random_table_problem(7, 0.3, 5, seed);
        for (int trial = 0; trial < 25; ++trial) {
            Assignment a = fixtures::random_assignment(p, rng);
            Assignment b = fixtures::random_assignment(p, rng);
            VariableId v = std::uniform_int_distribution<VariableId>(0, 6)(rng);
            Assignment c = a;
            c[v] = b[v];
            const double before = evaluate_global(p, a);
            const double delta = before - evaluate_global(p, c);
            const double gain = local_gain(p, v, a[v], c[v], fixtures::neighbor_map(p, v, a));
            EXPECT_LE(std::abs(delta - gain), 1e-9 * (1 + std::abs(before)));
        }
    }
}

TEST(Constraint, TableAndIndicatorFormsAgree) {
    std::mt19937_64 rng(5);
    std::vector<double> table(12);
    for (double& c : table) c = std::uniform_int_distribution<int>(-9, 9)(rng);
    std::vector<double> xs = {-1, 0, 4}, ys = {2, 3, 5, 7};
    Expression sum = Expression::constant(0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            sum = sum + Expression::constant(table[i * ys.size() + j]) * Expression::indicator(0, xs[i]) *
                            Expression::indicator(1, ys[j]);
        }
    }
    std::vector<Domain> ds = {Domain::discrete(xs), Domain::discrete(ys)};
    Problem tp(ds, {Constraint::table({0, 1}, table)});
    Problem fp(ds, {Constraint::function({0, 1}, sum)});
    for (double x : xs) {
        for (double y : ys) {
            EXPECT_EQ(evaluate_global(tp, Assignment{{x, y}}), evaluate_global(fp, Assignment{{x, y}}));
        }
    }
}

TEST(Constraint, BindRejectsInconsistentPayloads) {
    auto d2 = Domain::integer_range(0, 1);
    auto c = Domain::continuous(0, 1);
    EXPECT_THROW(Problem({d2, d2}, {Constraint::table({0, 1}, {1, 2, 3})}), ValidationError);
    EXPECT_THROW(Problem({d2, c}, {Constraint::table({0, 1}, {1, 2, 3, 4})}), ValidationError);
    EXPECT_THROW(Problem({d2, c}, {Constraint::function({0, 1}, Expression::indicator(1, 0))}),
                 ValidationError);
    EXPECT_THROW(Problem({d2, c}, {Constraint::function({0, 1}, Expression::indicator(0, 5))}),
                 ValidationError);
    EXPECT_THROW(Problem({d2, d2}, {Constraint::table({0, 0}, {1, 2, 3, 4})}), ValidationError);
    EXPECT_THROW(Problem({d2, d2}, {Constraint::table({0, 2}, {1, 2, 3, 4})}), ValidationError);
}

TEST(Expression, ParsesPrecedenceAndLiterals) {
    Problem p({Domain::continuous(-10, 10), Domain::integer_range(0, 3)},
              {Constraint::function({0, 1}, Expression::parse("2 + 3 * x_0 ^ 2 - -1.5 * I(x_1 == 2)"))});
    EXPECT_DOUBLE_EQ(evaluate_global(p, Assignment{{2, 2}}), 2 + 12 + 1.5);
    EXPECT_DOUBLE_EQ(evaluate_global(p, Assignment{{-1, 0}}), 5);
    EXPECT_DOUBLE_EQ(Expression::parse("-(x_0 - 4) * 2").nodes().size(), 6);
}

TEST(Expression, CanonicalTextRoundTrips) {
    std::vector<std::string> inputs = {"x_0 * x_1 + 0.1", "-(x_2) ^ 3", "I(x_0 == -2) * 1e-7",
                                       "((x_0))-x_1-x_2", "2^0"};
    for (const auto& in : inputs) {
        Expression e = Expression::parse(in);
        EXPECT_EQ(Expression::parse(e.to_string()), e) << in << " -> " << e.to_string();
    }
}

TEST(Expression, RejectsMalformedText) {
    for (const char* bad : {"", "x_", "1 +", "(x_0", "x_0 ^ 1.5", "x_0 ^ 65", "I(x_0 = 1)", "y_1", "x_0 x_1"}) {
        EXPECT_THROW(Expression::parse(bad), ParseError) << bad;
    }
}

TEST(Problem, NeighborIndexIsSymmetric) {
    Problem p = fixtures::random_table_problem(9, 0.3, 2, 17);
    for (VariableId v = 0; v < 9; ++v) {
        for (VariableId u : p.neighbors(v)) {
            auto nb = p.neighbors(u);
            EXPECT_NE(std::find(nb.begin(), nb.end(), v), nb.end());
        }
    }
}

TEST(LocalView, AgreesWithFreeFunctions) {
    std::mt19937_64 rng(8);
    Problem p = fixtures::random_quadratic_problem(6, 0.5, 4);
    for (VariableId v = 0; v < 6; ++v) {
        LocalView view(p, v);
        Assignment a = fixtures::random_assignment(p, rng);
        std::vector<double> nb;
        for (VariableId u : view.neighbors()) nb.push_back(a[u]);
        EXPECT_EQ(view.local_cost(a[v], nb), local_cost(p, v, a[v], fixtures::neighbor_map(p, v, a)));
    }
    // Owned costs partition the global cost.
    Assignment a = fixtures::random_assignment(p, rng);
    double owned = 0;
    for (VariableId v = 0; v < 6; ++v) {
        LocalView view(p, v);
        std::vector<double> nb;
        for (VariableId u : view.neighbors()) nb.push_back(a[u]);
        owned += view.owned_cost(a[v], nb);
    }
    EXPECT_TRUE(close_rel(owned, evaluate_global(p, a), 1e-12));
}

TEST(ProblemIo, RoundTripIsIdentical) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Problem t = fixtures::random_table_problem(6, 0.4, 3, seed);
        Problem q = fixtures::random_quadratic_problem(6, 0.4, seed);
        for (const Problem* p : {&t, &q}) {
            const std::string text = serialize_problem(*p);
            Problem back = parse_problem(text);
            EXPECT_EQ(back, *p);
            EXPECT_EQ(serialize_problem(back), text);
        }
    }
}

TEST(ProblemIo, MaximizeIsNegated) {
    const char* text = R"({"sense": "maximize",
        "variables": [{"id": 0, "kind": "discrete", "domain": [0, 1]},
                      {"id": 1, "kind": "continuous", "domain": [-1, 1]}],
        "constraints": [{"scope": [0], "table": [3, 5]},
                        {"scope": [0, 1], "expr": "x_0 + x_1"}]})";
    Problem p = parse_problem(text);
    EXPECT_EQ(evaluate_global(p, Assignment{{1, 0.5}}), -5 - 1.5);
    // Saved as the equivalent minimization problem.
    Problem again = parse_problem(serialize_problem(p));
    EXPECT_EQ(evaluate_global(again, Assignment{{1, 0.5}}), -6.5);
}

TEST(ProblemIo, RejectsDisconnectedAndMalformedFiles) {
    const std::string disconnected = what_of([] {
        parse_problem(R"({"variables": [{"id": 0, "kind": "discrete", "domain": [0, 1]},
                                        {"id": 1, "kind": "discrete", "domain": [0, 1]},
                                        {"id": 2, "kind": "discrete", "domain": [0, 1]}],
                          "constraints": [{"scope": [0, 1], "table": [1, 2, 3, 4]}]})");
    });
    EXPECT_NE(disconnected.find("disconnected"), std::string::npos);
    EXPECT_NE(disconnected.find("2"), std::string::npos);
    EXPECT_THROW(parse_problem("{"), ParseError);
    EXPECT_THROW(parse_problem(R"({"variables": [{"id": 0, "kind": "boolean", "domain": [0, 1]}],
                                   "constraints": []})"),
                 ValidationError);
    EXPECT_THROW(parse_problem(R"({"variables": [{"id": 1, "kind": "discrete", "domain": [0, 1]}],
                                   "constraints": []})"),
                 ValidationError);
}
