#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "cbf/config.hpp"
#include "cbf/csv.hpp"

using namespace cbf;

namespace {

const char* const kTtcbfText = R"(# collision avoidance, truncated-Taylor filter
robot_radius = 1
obs_radius = 2
obs_x = 0
obs_y = -3.1
init_x = -10
init_y = 0
init_vx = 10
init_vy = 0
y_ref = 0
vx_ref = 10
vy_ref = 0
p_vx = 1
p_vy = 1
p_y = 1000
u_min = -1000
u_max = 1000
dt = 0.01
duration = 2
approach = ttcbf
lambda1 = 0.5   # trailing comment
)";

KeyValues parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_key_values(in);
}

}  // namespace

TEST(ParseKeyValues, CommentsAndWhitespace)
{
    const auto kv = parse("a = 1\n  # only a comment\n\nb=two # note\n");
    EXPECT_EQ(kv.size(), 2u);
    EXPECT_EQ(kv.at("a"), "1");
    EXPECT_EQ(kv.at("b"), "two");
}

TEST(ParseKeyValues, RejectsDuplicatesAndBareLines)
{
    EXPECT_THROW((void)parse("a = 1\na = 2\n"), ConfigError);
    EXPECT_THROW((void)parse("just words\n"), ConfigError);
}

TEST(SimConfigFromKeys, TableValues)
{
    const auto c = sim_config_from_keys(parse(kTtcbfText));
    EXPECT_EQ(c.obstacle.y_obs, -3.1);
    EXPECT_EQ(c.obstacle.r_obs, 2.0);
    EXPECT_EQ(c.initial, (RobotState{-10.0, 0.0, 10.0, 0.0}));
    EXPECT_EQ(c.penalties.p_y, 1000.0);
    EXPECT_EQ(c.step_count(), 200u);
    const auto& a = std::get<TtcbfApproach>(c.approach);
    EXPECT_EQ(a.lambda1, 0.5);
    EXPECT_EQ(a.gamma, 0.0);
}

TEST(SimConfigFromKeys, MissingKeyIsNamed)
{
    auto kv = parse(kTtcbfText);
    kv.erase("obs_radius");
    try {
        (void)sim_config_from_keys(kv);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "obs_radius");
        EXPECT_NE(std::string(e.what()).find("obs_radius"), std::string::npos);
    }
}

TEST(SimConfigFromKeys, HocbfNeedsSecondLambda)
{
    auto kv = parse(kTtcbfText);
    kv["approach"] = "hocbf";
    kv["lambda1"] = "10";
    EXPECT_THROW((void)sim_config_from_keys(kv), ConfigError);
    kv["lambda2"] = "0.5";
    const auto c = sim_config_from_keys(kv);
    EXPECT_EQ(std::get<HocbfApproach>(c.approach).lambda2, 0.5);
}

TEST(SimConfigFromKeys, RejectsBadValues)
{
    auto kv = parse(kTtcbfText);
    kv["mystery"] = "1";
    EXPECT_THROW((void)sim_config_from_keys(kv), ConfigError);

    kv = parse(kTtcbfText);
    kv["dt"] = "fast";
    EXPECT_THROW((void)sim_config_from_keys(kv), ConfigError);

    kv = parse(kTtcbfText);
    kv["approach"] = "mpc";
    EXPECT_THROW((void)sim_config_from_keys(kv), ConfigError);

    kv = parse(kTtcbfText);
    kv["lambda1"] = "1.5";
    EXPECT_THROW((void)sim_config_from_keys(kv), ConfigError);
}

TEST(SimConfigFromKeys, TextRoundTrip)
{
    SimConfig c;
    c.approach = HocbfApproach{2.1, 10.0};
    c.obstacle.y_obs = -3.0999999999999996;
    c.dt = 0.003;
    const auto back = sim_config_from_keys(parse(to_config_text(c)));
    EXPECT_EQ(back.obstacle.y_obs, c.obstacle.y_obs);
    EXPECT_EQ(back.dt, c.dt);
    EXPECT_EQ(std::get<HocbfApproach>(back.approach).lambda1, 2.1);
    EXPECT_EQ(to_config_text(back), to_config_text(c));
}

TEST(SweepSpecFromKeys, OptionalRanges)
{
    auto kv = parse(kTtcbfText);
    kv["lambda1_min"] = "0.1";
    kv["lambda1_max"] = "0.3";
    kv["lambda1_step"] = "0.1";
    const auto spec = sweep_spec_from_keys(kv);
    EXPECT_EQ(spec.kind, ApproachKind::ttcbf);
    EXPECT_EQ(spec.lambda1.values(), (std::vector<double>{0.1, 0.2, 0.3}));

    auto defaults = parse(kTtcbfText);
    defaults.erase("lambda1");
    EXPECT_EQ(sweep_spec_from_keys(defaults).lambda1.values().size(), 50u);
}

TEST(FormatDouble, ShortestRoundTrip)
{
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(-3.1), "-3.1");
    EXPECT_EQ(format_double(100.0), "100");
    EXPECT_EQ(parse_double("+2.5"), 2.5);
    EXPECT_THROW((void)parse_double("2.5x"), std::invalid_argument);
    EXPECT_THROW((void)parse_double(""), std::invalid_argument);

    std::mt19937_64 rng(71);
    std::uniform_int_distribution<std::uint64_t> bits;
    int checked = 0;
    while (checked < 1000) {
        const double v = std::bit_cast<double>(bits(rng));
        if (!std::isfinite(v))
            continue;
        EXPECT_EQ(parse_double(format_double(v)), v);
        ++checked;
    }
}

TEST(SplitCsvLine, EmptyCells)
{
    EXPECT_EQ(split_csv_line("a,,b,"), (std::vector<std::string>{"a", "", "b", ""}));
    EXPECT_EQ(split_csv_line(""), std::vector<std::string>{""});
}

TEST(StepCsv, RoundTripsExactly)
{
    SimConfig c;
    c.approach = TtcbfApproach{0.05, 0.0, 0.0};
    const auto log = run_simulation(c);
    std::stringstream buffer;
    write_step_csv(buffer, log);

    std::string header;
    std::getline(buffer, header);
    EXPECT_EQ(header, kStepCsvHeader);
    buffer.seekg(0);

    const auto back = read_step_csv(buffer);
    ASSERT_EQ(back.steps.size(), log.steps.size());
    for (std::size_t k = 0; k < log.steps.size(); ++k) {
        const auto& a = log.steps[k];
        const auto& b = back.steps[k];
        EXPECT_EQ(a.step, b.step);
        EXPECT_EQ(a.t, b.t);
        EXPECT_EQ(a.state, b.state);
        EXPECT_EQ(a.u, b.u);
        EXPECT_EQ(a.h, b.h);
        EXPECT_EQ(a.h_dot, b.h_dot);
        EXPECT_EQ(a.constraint_offset, b.constraint_offset);
        EXPECT_EQ(a.active_set, b.active_set);
        EXPECT_EQ(a.status, b.status);
        EXPECT_EQ(a.ttcbf_slack, b.ttcbf_slack);
    }
    EXPECT_FALSE(back.final_state.has_value());
}

TEST(StepCsv, RejectsWrongHeader)
{
    std::istringstream in("step,t\n0,0\n");
    EXPECT_THROW((void)read_step_csv(in), std::invalid_argument);
}

TEST(SweepCsv, BlankCellsByApproach)
{
    SweepRow h{ApproachKind::hocbf, 2.1, 10.0, std::nullopt, {}};
    SweepRow t{ApproachKind::ttcbf, 0.5, std::nullopt, 0.0, {}};
    h.summary.bypass = true;
    std::ostringstream out;
    write_sweep_csv(out, {h, t});
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, kSweepCsvHeader);
    std::getline(in, line);
    EXPECT_EQ(line, "hocbf,2.1,10,,0,0,true,0");
    std::getline(in, line);
    EXPECT_EQ(line, "ttcbf,0.5,,0,0,0,false,0");
}

TEST(LowerBoundCsv, Layout)
{
    const ExponentialSumBound b{{2.0, 1.0}, LambdaVector{1.0, 2.0}, 0.0};
    std::ostringstream out;
    write_lower_bound_csv(out, b, {0.0, 1.0});
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# rate,coefficient");
    std::getline(in, line);
    EXPECT_EQ(line, "# 1,2");
    std::getline(in, line);
    EXPECT_EQ(line, "# 2,1");
    std::getline(in, line);
    EXPECT_EQ(line, "t,h_lb");
    std::getline(in, line);
    EXPECT_EQ(line, "0,3");
}
