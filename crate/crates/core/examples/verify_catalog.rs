//! Runs a few catalog grids and prints the JSON report.
use digitsum::harness::{catalog, emit_report, run_grids, Format, GridSpec};
use digitsum::report::ParamValue;
use digitsum::PrecisionContext;

fn main() -> digitsum::Result<()> {
    println!("{} registered identities", catalog().len());
    let grids = [
        GridSpec::new("pi-over-2"),
        GridSpec::new("weights").with_param("N", (1..=3).map(ParamValue::Int).collect()),
        GridSpec::new("putnam").with_param("b", vec![ParamValue::Int(2)]),
    ];
    let run = run_grids(&grids, &PrecisionContext::default())?;
    emit_report(&run, Format::Json, &mut std::io::stdout())?;
    println!("{} of {} passed", run.summary.passed, run.summary.total);
    Ok(())
}
