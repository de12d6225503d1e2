//! Command bodies, independent of argument parsing.

use batchdispatch_core::conditions::{
    self, ConditionTable, EquivalenceReport, SignConvention, Verdict,
};
use batchdispatch_core::model::{self, Binding, MidrouteModel, ThresholdSolution};
use batchdispatch_core::sim::{Estimate, MidrouteVariant, SimConfig, SimResult};
use batchdispatch_core::MarketParams;
use serde::Serialize;

use crate::error::Result;
use crate::format::{self, flag, num, opt_num, Csv};
use crate::manifest::Artifact;
use crate::{parallel, svg};

/// Header of the `eval` table.
pub const EVAL_HEADER: [&str; 7] = [
    "n",
    "profit_rate",
    "increment",
    "numerator",
    "expected_wait",
    "feasible",
    "midroute",
];

/// One row per threshold.
pub fn eval_table(params: &MarketParams) -> Result<String> {
    let mut csv = Csv::new(&EVAL_HEADER);
    for e in model::evaluate_all(params)? {
        csv.row([
            e.n.to_string(),
            num(e.profit_rate),
            opt_num(e.increment),
            opt_num(e.numerator),
            num(e.expected_wait),
            flag(e.feasible).to_owned(),
            num(e.midroute),
        ]);
    }
    Ok(csv.into_string())
}

/// The `solve` output object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SolveOutput {
    /// `ñ*`.
    pub n_unconstrained: u32,
    /// `⌊2λw̄ + 1⌋`.
    pub demand_ceiling: u64,
    /// `n*`.
    pub n_constrained: u32,
    /// Active bound.
    pub binding: Binding,
    /// First-crossing and argmax rules disagree.
    pub divergence_flag: bool,
}

impl From<ThresholdSolution> for SolveOutput {
    fn from(s: ThresholdSolution) -> Self {
        SolveOutput {
            n_unconstrained: s.n_unconstrained,
            demand_ceiling: s.demand_ceiling,
            n_constrained: s.n_constrained,
            binding: s.binding,
            divergence_flag: s.divergence,
        }
    }
}

/// Solve at one parameter set.
pub fn solve(params: &MarketParams) -> Result<SolveOutput> {
    Ok(model::n_star_constrained(params)?.into())
}

/// One point of an arrival-rate sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    /// Arrival rate.
    pub lambda: f64,
    /// Solution there.
    #[serde(flatten)]
    pub solution: SolveOutput,
}

/// `steps` evenly spaced arrival rates from `params.arrival_rate` to `to`.
pub fn solve_sweep(params: &MarketParams, to: f64, steps: usize) -> Result<Vec<SweepPoint>> {
    let from = params.arrival_rate;
    let rates: Vec<f64> = if steps <= 1 {
        vec![from]
    } else {
        (0..steps)
            .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
            .collect()
    };
    rates
        .into_iter()
        .map(|lambda| {
            let p = MarketParams {
                arrival_rate: lambda,
                ..*params
            };
            Ok(SweepPoint {
                lambda,
                solution: solve(&p)?,
            })
        })
        .collect()
}

/// An estimate next to its closed-form target.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Comparison {
    /// Monte Carlo mean.
    pub estimate: f64,
    /// Its standard error.
    pub std_error: f64,
    /// Closed-form value.
    pub analytic: f64,
    /// `(estimate − analytic)/std_error`; null when undefined.
    pub z_score: Option<f64>,
}

impl Comparison {
    fn new(e: Estimate, analytic: f64) -> Self {
        Comparison {
            estimate: e.mean,
            std_error: e.std_error,
            analytic,
            z_score: e.z_score(analytic),
        }
    }
}

/// The `simulate` output object.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    /// Market parameters.
    pub params: MarketParams,
    /// Threshold.
    pub n: u32,
    /// Requested cycles.
    pub cycles: u64,
    /// Cycles simulated.
    pub cycles_run: u64,
    /// Base seed.
    pub seed: u64,
    /// Mid-route variant.
    pub variant: MidrouteVariant,
    /// Terminal wait per passenger.
    pub mean_wait: Comparison,
    /// Admitted roadside riders per cycle.
    pub mean_midroute: Comparison,
    /// Profit per hour.
    pub profit_rate: Comparison,
}

/// Closed-form targets matching a simulation variant.
pub fn analytic_targets(config: &SimConfig) -> Result<(f64, f64, f64)> {
    let midroute = match config.variant {
        MidrouteVariant::AggregateMin => MidrouteModel::Linear,
        MidrouteVariant::SequentialThinned => MidrouteModel::Thinned,
    };
    let p = config.params.with_midroute(midroute);
    let n = config.threshold;
    Ok((
        model::expected_wait(n, p.arrival_rate)?,
        model::expected_midroute(&p, n)?,
        model::profit_rate(&p, n)?,
    ))
}

/// Run a simulation and set it beside the closed forms.
pub fn simulate(config: &SimConfig, threads: Option<usize>) -> Result<SimReport> {
    let result: SimResult = parallel::simulate(config, threads)?;
    let (wait, midroute, profit) = analytic_targets(config)?;
    Ok(SimReport {
        params: config.params,
        n: config.threshold,
        cycles: config.cycles,
        cycles_run: result.cycles_run,
        seed: config.seed,
        variant: config.variant,
        mean_wait: Comparison::new(result.mean_wait, wait),
        mean_midroute: Comparison::new(result.mean_midroute, midroute),
        profit_rate: Comparison::new(result.profit_rate, profit),
    })
}

/// Grids for the condition tables.
#[derive(Clone, Debug, PartialEq)]
pub struct TableGrids {
    /// Thresholds tabulated for the travel-time condition, one file each.
    pub thresholds: Vec<u32>,
    /// Arrival-rate axis.
    pub arrival_rates: Vec<f64>,
    /// Travel-time axis.
    pub travel_times: Vec<f64>,
    /// Thresholds of the equivalence grid.
    pub equivalence_thresholds: Vec<u32>,
    /// Means of the equivalence grid.
    pub means: Vec<f64>,
}

impl Default for TableGrids {
    fn default() -> Self {
        TableGrids {
            thresholds: vec![3, 4, 5],
            arrival_rates: conditions::TABLE_B_AXIS.to_vec(),
            travel_times: conditions::TABLE_B_AXIS.to_vec(),
            equivalence_thresholds: (1..=5).collect(),
            means: conditions::default_mean_grid(),
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "Yes"
    } else {
        "No"
    }
}

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::Boundary => "boundary",
    }
}

/// `n,lambda,<T columns>` with Yes/No cells.
pub fn table_b_csv(table: &ConditionTable) -> String {
    let t_cols: Vec<String> = table
        .travel_times
        .iter()
        .map(|t| format!("T={}", num(*t)))
        .collect();
    let mut header = vec!["n", "lambda"];
    header.extend(t_cols.iter().map(String::as_str));
    let mut csv = Csv::new(&header);
    for (l, row) in table.arrival_rates.iter().zip(&table.cells) {
        let mut cells = vec![table.n.to_string(), num(*l)];
        cells.extend(row.iter().map(|&c| yes_no(c).to_owned()));
        csv.row(cells);
    }
    csv.into_string()
}

/// Pairwise agreement counts for every convention.
pub fn table_c_csv(reports: &[EquivalenceReport]) -> String {
    let mut csv = Csv::new(&["convention", "form_a", "form_b", "agree", "total"]);
    for r in reports {
        let label = r.convention.label();
        let total = r.total().to_string();
        for a in conditions::ConditionForm::ALL {
            for b in conditions::ConditionForm::ALL {
                csv.row([
                    label,
                    a.label(),
                    b.label(),
                    &r.matches(a, b).to_string(),
                    &total,
                ]);
            }
        }
        csv.row([
            label,
            "direct",
            "probabilistic",
            &r.direct_probabilistic_agreement.to_string(),
            &total,
        ]);
    }
    csv.into_string()
}

/// Every `(n, μ)` cell with each form's verdict.
pub fn table_c_grid_csv(reports: &[EquivalenceReport]) -> String {
    let mut csv = Csv::new(&[
        "convention",
        "n",
        "mu",
        "direct",
        "probabilistic",
        "factorial",
        "exp_bound",
    ]);
    for r in reports {
        for c in &r.cells {
            csv.row([
                r.convention.label().to_owned(),
                c.n.to_string(),
                num(c.mu),
                verdict_label(c.direct).to_owned(),
                verdict_label(c.verdicts[0]).to_owned(),
                verdict_label(c.verdicts[1]).to_owned(),
                verdict_label(c.verdicts[2]).to_owned(),
            ]);
        }
    }
    csv.into_string()
}

/// Coordinates of every disagreeing pair.
pub fn table_c_divergences_csv(reports: &[EquivalenceReport]) -> String {
    let mut csv = Csv::new(&[
        "convention",
        "n",
        "mu",
        "form_a",
        "form_b",
        "verdict_a",
        "verdict_b",
    ]);
    for r in reports {
        for d in &r.divergences {
            csv.row([
                r.convention.label().to_owned(),
                d.n.to_string(),
                num(d.mu),
                d.form_a.label().to_owned(),
                d.form_b.label().to_owned(),
                verdict_label(d.verdict_a).to_owned(),
                verdict_label(d.verdict_b).to_owned(),
            ]);
        }
    }
    csv.into_string()
}

/// Condition tables and the equivalence grid.
///
/// Travel-time tables are written as `table_b1.csv`, `table_b2.csv`, ... in the order of
/// `grids.thresholds`; each row carries its threshold.
pub fn tables(grids: &TableGrids) -> Result<Vec<Artifact>> {
    let mut out = Vec::new();
    for (i, &n) in grids.thresholds.iter().enumerate() {
        let t = conditions::table_b(n, &grids.arrival_rates, &grids.travel_times)?;
        out.push(Artifact::new(
            format!("table_b{}.csv", i + 1),
            table_b_csv(&t),
        ));
    }
    let reports = SignConvention::ALL
        .iter()
        .map(|&c| conditions::equivalence_grid(&grids.equivalence_thresholds, &grids.means, c))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    out.push(Artifact::new("table_c.csv", table_c_csv(&reports)));
    out.push(Artifact::new(
        "table_c_grid.csv",
        table_c_grid_csv(&reports),
    ));
    out.push(Artifact::new(
        "table_c_divergences.csv",
        table_c_divergences_csv(&reports),
    ));
    Ok(out)
}

/// Default market for the threshold figure.
pub fn figure2_defaults() -> MarketParams {
    MarketParams::new(1.0, 0.33).with_tolerance(0.5)
}

/// Numeric series and the rendered plot for the threshold figure.
pub fn figure2(params: &MarketParams) -> Result<Vec<Artifact>> {
    let evals = model::evaluate_all(params)?;
    let solution = model::n_star_constrained(params)?;
    let mut csv = Csv::new(&[
        "n",
        "profit_rate",
        "expected_wait",
        "wbar",
        "feasible",
        "n_star",
    ]);
    for e in &evals {
        csv.row([
            e.n.to_string(),
            num(e.profit_rate),
            num(e.expected_wait),
            num(params.tolerance),
            flag(e.feasible).to_owned(),
            flag(e.n == solution.n_constrained).to_owned(),
        ]);
    }
    let plot = svg::threshold_figure(&evals, params.tolerance, solution.n_constrained);
    Ok(vec![
        Artifact::new("figure2.csv", csv.into_string()),
        Artifact::new("figure2.svg", plot),
    ])
}

/// JSON text for any serializable output.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    format::json(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> MarketParams {
        figure2_defaults()
    }

    #[test]
    fn eval_feasibility_matches_figure() {
        let csv = eval_table(&fig2()).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], EVAL_HEADER.join(","));
        assert_eq!(rows.len(), 7);
        let feasible: Vec<&str> = rows[1..]
            .iter()
            .map(|r| r.split(',').nth(5).unwrap())
            .collect();
        assert_eq!(
            feasible,
            ["true", "true", "false", "false", "false", "false"]
        );
        // Last row has no increment or numerator.
        assert!(rows[6].starts_with("6,") && rows[6].contains(",,,"));
    }

    #[test]
    fn eval_without_acceptance_has_no_midroute() {
        let csv = eval_table(&fig2().with_acceptance(0.0)).unwrap();
        for r in csv.lines().skip(1) {
            let cells: Vec<&str> = r.split(',').collect();
            assert_eq!(cells[6], "0");
            assert_eq!(cells[3], "");
        }
    }

    #[test]
    fn solve_figure() {
        let s = solve(&fig2()).unwrap();
        assert_eq!(
            (s.demand_ceiling, s.n_constrained, s.binding),
            (2, 2, Binding::Demand)
        );
        let loose = solve(&fig2().with_tolerance(1e9)).unwrap();
        assert!(matches!(loose.binding, Binding::Profit | Binding::Capacity));
        let json = to_json(&s).unwrap();
        assert!(json.contains("\"binding\": \"demand\""));
        assert!(json.find("binding").unwrap() < json.find("demand_ceiling").unwrap());
    }

    #[test]
    fn sweep_weakly_increasing() {
        let p = fig2().with_tolerance(0.5);
        let p = MarketParams {
            arrival_rate: 0.2,
            ..p
        };
        let sweep = solve_sweep(&p, 3.0, 57).unwrap();
        assert_eq!(sweep.len(), 57);
        assert!((sweep.last().unwrap().lambda - 3.0).abs() < 1e-12);
        for w in sweep.windows(2) {
            assert!(w[0].solution.n_constrained <= w[1].solution.n_constrained);
        }
    }

    #[test]
    fn default_tables() {
        let files = tables(&TableGrids::default()).unwrap();
        let names: Vec<&str> = files.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "table_b1.csv",
                "table_b2.csv",
                "table_b3.csv",
                "table_c.csv",
                "table_c_grid.csv",
                "table_c_divergences.csv"
            ]
        );
        let yes = |s: &str| s.matches("Yes").count();
        assert_eq!(yes(&files[0].contents), 25);
        assert_eq!(yes(&files[1].contents), 25);
        assert_eq!(yes(&files[2].contents), 3);
        assert_eq!(files[4].contents.lines().count(), 501);
    }

    #[test]
    fn single_cell_table() {
        let grids = TableGrids {
            thresholds: vec![5],
            arrival_rates: vec![1.0],
            travel_times: vec![1.0],
            ..TableGrids::default()
        };
        let files = tables(&grids).unwrap();
        assert_eq!(files[0].contents, "n,lambda,T=1\n5,1,No\n");
    }

    #[test]
    fn figure_series() {
        let files = figure2(&fig2()).unwrap();
        let csv = &files[0].contents;
        let rows: Vec<Vec<&str>> = csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').collect())
            .collect();
        assert_eq!(rows[0][2], "0");
        let marked: Vec<&str> = rows
            .iter()
            .filter(|r| r[5] == "true")
            .map(|r| r[0])
            .collect();
        assert_eq!(marked, ["2"]);
        // Profit peaks at n = 5 among the first five thresholds.
        let profits: Vec<f64> = rows.iter().take(5).map(|r| r[1].parse().unwrap()).collect();
        let peak = profits.iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(profits[4], peak);
        assert!(files[1].contents.starts_with("<?xml"));
    }

    #[test]
    fn simulate_report_fields() {
        let cfg = SimConfig::new(MarketParams::new(2.0, 0.33), 4, 20_000, 42);
        let r = simulate(&cfg, Some(2)).unwrap();
        assert_eq!(r.cycles_run, 20_000);
        assert_eq!(r.mean_wait.analytic, 0.75);
        assert!(r.mean_wait.z_score.unwrap().abs() < 4.0);
        assert_eq!(r, simulate(&cfg, Some(3)).unwrap());
    }
}
