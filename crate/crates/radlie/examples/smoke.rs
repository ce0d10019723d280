use radlie::lab::{run_suite, InstanceSpec, SuiteKind};

fn main() {
    let spec = InstanceSpec {
        trials: 12,
        seed: 42,
        ..Default::default()
    };
    for kind in SuiteKind::ALL {
        let start = std::time::Instant::now();
        match run_suite(kind, &spec) {
            Ok(report) => println!(
                "{:<18} failures {:>2}  hyp-skip {:>2}  max-res {:.3e}  {:?}",
                report.suite,
                report.failures.len(),
                report.hypothesis_not_met,
                report.max_residual,
                start.elapsed()
            ),
            Err(e) => println!("{:<18} ERROR: {e}", kind.name()),
        }
    }
}
