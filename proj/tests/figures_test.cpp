#include "cos2phi/error.hpp"
#include "cos2phi/figures.hpp"
#include "cos2phi/sweep.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

using namespace cos2phi;

namespace {

bool has_columns(const Table& t, const std::vector<std::string>& want)
{
    return std::ranges::all_of(want, [&t](const std::string& c) {
        return std::ranges::find(t.columns, c) != t.columns.end();
    });
}

} // namespace

TEST(Figures, TableCsvRoundTrip)
{
    Table t{{"a", "b"}, {}};
    t.add({1.0, 0.1 + 0.2});
    t.add({-3e-300, 7.0});
    std::ostringstream out;
    write_csv(t, out);
    std::istringstream in(out.str());
    const auto back = read_csv(in);
    EXPECT_EQ(back.columns, t.columns);
    EXPECT_EQ(back.rows, t.rows);
    EXPECT_THROW(t.add({1.0}), InvalidArgument);
    EXPECT_THROW((void)t.column("c"), SchemaError);
}

TEST(Figures, ChargeDispersionPanels)
{
    const auto t = fig4_dataset(21);
    EXPECT_TRUE(has_columns(t, required_columns("fig4")));
    std::set<double> panels;
    for (const auto& row : t.rows) panels.insert(row[t.column("panel")]);
    EXPECT_EQ(panels.size(), 6U);
    EXPECT_EQ(t.rows.size(), 6U * 21U);
    for (const auto& row : t.rows) {
        EXPECT_LE(row[t.column("e0")], row[t.column("e1")] + 1e-12);
        EXPECT_LE(row[t.column("e1")], row[t.column("e2")] + 1e-12);
    }
}

TEST(Figures, CoherenceVersusFlux)
{
    const auto t = fig8_dataset(20.0, 9);
    EXPECT_TRUE(has_columns(t, required_columns("fig8")));
    ASSERT_EQ(t.rows.size(), 9U);
    EXPECT_EQ(t.rows.front()[t.column("dphi")], 1e-6);
    EXPECT_EQ(t.rows.back()[t.column("dphi")], 1e-2);
}

TEST(Figures, MapFromSweep)
{
    SweepResult r;
    SweepRow row;
    row.ejs2 = 0.3;
    row.ec = 0.1;
    row.t2 = 1e-5;
    row.limits.temperature = true;
    r.rows = {row, SweepRow{}};
    r.rows[1].flags.clear();
    const auto t = fig9_dataset(r);
    ASSERT_EQ(t.rows.size(), 1U);
    EXPECT_EQ(t.rows[0][t.column("temperature")], 1.0);
    EXPECT_EQ(t.rows[0][t.column("flux")], 0.0);
}

TEST(Figures, ScriptsFollowSchema)
{
    EXPECT_NE(emit_plot_script(fig4_dataset(5), "fig4", "f.csv").find("\"e2\""), std::string::npos);
    const auto fig8 = emit_plot_script(fig8_dataset(20.0, 5), "fig8", "f.csv");
    EXPECT_NE(fig8.find("loglog"), std::string::npos);
    Table map{required_columns("fig9"), {}};
    const auto fig9 = emit_plot_script(map, "fig9", "m.csv");
    EXPECT_NE(fig9.find("m.csv"), std::string::npos);
    for (const char* overlay : {"\"temperature\"", "\"charge\"", "\"flux\""}) EXPECT_NE(fig9.find(overlay), std::string::npos);
}

TEST(Figures, ScriptRejectsMissingColumns)
{
    Table t{{"dphi", "tphi_s"}, {}};
    try {
        (void)emit_plot_script(t, "fig8", "x.csv");
        FAIL();
    } catch (const SchemaError& e) {
        EXPECT_NE(std::string(e.what()).find("t1_flux_s"), std::string::npos);
    }
    EXPECT_THROW(required_columns("fig42"), InvalidArgument);
}

TEST(Figures, AsymmetryAndMapDatasets)
{
    EXPECT_TRUE(has_columns(fig5_dataset(5), required_columns("fig5")));
    EXPECT_TRUE(has_columns(fig6_dataset(4, 4), required_columns("fig6")));
    const auto fig7 = fig7_dataset(11);
    EXPECT_TRUE(has_columns(fig7, required_columns("fig7")));
    EXPECT_EQ(fig7.rows.size(), 22U);
}
