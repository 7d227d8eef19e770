//! Running a configured experiment and summarising the regret curves.

use exp_oco::harness::{
    aggregate, final_round_stats, run_experiment, write_csv, ExperimentSpec, RadiusMode,
};

fn main() {
    let mut spec = ExperimentSpec::logistic();
    spec.dim = 100;
    spec.horizon = 500;
    spec.trials = 5;
    spec.radius_mode = RadiusMode::Double;

    let records = run_experiment(&spec).unwrap();
    for alg in &spec.algorithms {
        let (mean, std) = final_round_stats(&records, alg).unwrap();
        println!("{alg:9} final regret {mean:8.2} ± {std:.2}");
    }

    let summary = aggregate(&records);
    println!("{} (algorithm, round) summaries", summary.len());

    let mut head = Vec::new();
    write_csv(&records[..3], &mut head).unwrap();
    print!("{}", String::from_utf8(head).unwrap());
}
