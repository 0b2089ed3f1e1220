//! Every example doubles as a smoke test.

#[path = "../examples/densities.rs"]
mod densities;
#[path = "../examples/dinf_clt.rs"]
mod dinf_clt;
#[path = "../examples/divergences.rs"]
mod divergences;
#[path = "../examples/edgeworth.rs"]
mod edgeworth;
#[path = "../examples/esscher.rs"]
mod esscher;
#[path = "../examples/hermite_moments.rs"]
mod hermite_moments;
#[path = "../examples/mixture_chi2.rs"]
mod mixture_chi2;
#[path = "../examples/model_zoo.rs"]
mod model_zoo;
#[path = "../examples/periodic_criterion.rs"]
mod periodic_criterion;
#[path = "../examples/quartic_family.rs"]
mod quartic_family;
#[path = "../examples/rate_experiment.rs"]
mod rate_experiment;
#[path = "../examples/subgauss_checks.rs"]
mod subgauss_checks;
#[path = "../examples/truncated_tsallis.rs"]
mod truncated_tsallis;

#[test]
fn densities_runs() {
    densities::run().unwrap();
}

#[test]
fn dinf_clt_runs() {
    dinf_clt::run().unwrap();
}

#[test]
fn divergences_runs() {
    divergences::run().unwrap();
}

#[test]
fn edgeworth_runs() {
    edgeworth::run().unwrap();
}

#[test]
fn esscher_runs() {
    esscher::run().unwrap();
}

#[test]
fn hermite_moments_runs() {
    hermite_moments::run().unwrap();
}

#[test]
fn mixture_chi2_runs() {
    mixture_chi2::run().unwrap();
}

#[test]
fn model_zoo_runs() {
    model_zoo::run().unwrap();
}

#[test]
fn periodic_criterion_runs() {
    periodic_criterion::run().unwrap();
}

#[test]
fn quartic_family_runs() {
    quartic_family::run().unwrap();
}

#[test]
fn rate_experiment_runs() {
    rate_experiment::run().unwrap();
}

#[test]
fn subgauss_checks_runs() {
    subgauss_checks::run().unwrap();
}

#[test]
fn truncated_tsallis_runs() {
    truncated_tsallis::run().unwrap();
}
