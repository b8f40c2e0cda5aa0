#include "explift/rng.hpp"
#include "explift/serialize.hpp"

#include <gtest/gtest.h>

using namespace explift;

TEST(EnsembleJson, RoundTripPreservesEverything) {
  for (const MeasurementEnsemble& e : {thm1_ensemble(5, default_thm1_nodes(5), 0.3),
                                       thm2_ensemble(7, 2, default_thm2_nodes(2), true), example_n4()}) {
    const MeasurementEnsemble back = ensemble_from_json(ensemble_to_json(e));
    EXPECT_EQ(back.n, e.n);
    EXPECT_EQ(back.r, e.r);
    EXPECT_EQ(back.recipe.kind, e.recipe.kind);
    EXPECT_EQ(back.recipe.nodes, e.recipe.nodes);
    EXPECT_EQ(back.recipe.phase, e.recipe.phase);
    EXPECT_EQ(back.recipe.imag_first, e.recipe.imag_first);
    ASSERT_EQ(back.size(), e.size());
    for (std::size_t i = 0; i < e.size(); ++i) EXPECT_EQ(back.matrices[i].matrix(), e.matrices[i].matrix());
    ASSERT_EQ(back.recipe.blocks.size(), e.recipe.blocks.size());
    EXPECT_TRUE(certify_structural(back).passed);
  }
}

TEST(EnsembleJson, MalformedInputs) {
  EXPECT_THROW(ensemble_from_json("{"), ParseError);
  EXPECT_THROW(ensemble_from_json(R"({"n": 2})"), ParseError);
  EXPECT_THROW(ensemble_from_json(R"({"n": 2, "matrices": [[[[1,0]]]]})"), ParseError);
  EXPECT_THROW(ensemble_from_json(R"({"n": 1, "recipe": "bogus", "matrices": [[[[1,0]]]]})"), ParseError);
  // Not Hermitian.
  EXPECT_THROW(ensemble_from_json(R"({"n": 2, "matrices": [[[[0,0],[1,0]],[[0,0],[0,0]]]]})"), ParseError);
  EXPECT_NO_THROW(ensemble_from_json(R"({"n": 1, "matrices": [[[[1,0]]]]})"));
}

TEST(OutcomeText, CsvAndJsonRoundTrip) {
  RealVector b(4);
  b << 0.1, -2.5e-17, 3.0, 1.0 / 3.0;
  EXPECT_EQ(outcome_from_text(outcome_to_csv(b)), b);
  EXPECT_EQ(outcome_from_text(outcome_to_json(b)), b);
  EXPECT_THROW(outcome_from_text(""), ParseError);
  EXPECT_THROW(outcome_from_text("index,value\n0,1\n2,3\n"), ParseError);
  EXPECT_THROW(outcome_from_text("index,value\n0,abc\n"), ParseError);
  EXPECT_THROW(outcome_from_text("[1, \"x\"]"), ParseError);
}

TEST(StateJson, SignalsAndMatrices) {
  const HermitianMatrix s = state_from_json("[[1,0],[0,1]]");
  EXPECT_EQ(s(0, 1), Complex(0.0, -1.0));
  const HermitianMatrix m = state_from_json("[[[2,0],[0,1]],[[0,-1],[3,0]]]");
  EXPECT_EQ(m(1, 0), Complex(0.0, -1.0));
  EXPECT_THROW(state_from_json("[[[2,0],[5,1]],[[0,-1],[3,0]]]"), ParseError);
  EXPECT_EQ(signal_from_json("[[1,2]]")(0), Complex(1.0, 2.0));
}

TEST(ConfigJson, RoundTripAndOverrides) {
  ExperimentConfig cfg;
  cfg.n_values = {3, 9};
  cfg.trials = 17;
  cfg.epsilon = 2e-4;
  cfg.seed = 99;
  cfg.family = ExperimentFamily::thm1;
  cfg.solver.max_iters = 321;
  const ExperimentConfig back = config_from_json(config_to_json(cfg));
  EXPECT_EQ(config_to_json(back), config_to_json(cfg));
  EXPECT_EQ(config_hash(back), config_hash(cfg));
  const ExperimentConfig partial = config_from_json(R"({"trials": 3})", cfg);
  EXPECT_EQ(partial.trials, 3);
  EXPECT_EQ(partial.n_values, cfg.n_values);
  EXPECT_THROW(config_from_json(R"({"family": "x"})"), ParseError);
  EXPECT_THROW(config_from_json("[1]"), ParseError);
}

TEST(ReportCsv, FixedColumns) {
  StabilityReport rep;
  rep.rows.push_back({3, 2, 1.5, 1.0, 1.0, 0.0, 0});
  EXPECT_EQ(report_to_csv(rep),
            "n,trials,max_ratio,mean_ratio,sigma_min,kappa_hat,nonconverged\n3,2,1.5,1,1,0,0\n");
  EXPECT_EQ(trials_to_csv({{3, 0, 0.5, 1e-3, 12, true}}),
            "n,trial,ratio,residual,iterations,converged\n3,0,0.5,0.001,12,1\n");
  EXPECT_EQ(report_plot_data(rep), "# n max_ratio\n3 1.5\n");
}
