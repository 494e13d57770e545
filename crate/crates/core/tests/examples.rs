//! Every example under examples/ runs to completion.

#[path = "../examples/emit_catalog.rs"]
mod emit_catalog;

#[test]
fn emit_catalog_runs() {
    emit_catalog::run().expect("emit_catalog example");
}

#[path = "../examples/count_lie_algebras.rs"]
mod count_lie_algebras;

#[test]
fn count_lie_algebras_runs() {
    count_lie_algebras::run().expect("count_lie_algebras example");
}

#[path = "../examples/regular_semisimple.rs"]
mod regular_semisimple;

#[test]
fn regular_semisimple_runs() {
    regular_semisimple::run().expect("regular_semisimple example");
}

#[path = "../examples/pfaffian.rs"]
mod pfaffian;

#[test]
fn pfaffian_runs() {
    pfaffian::run().expect("pfaffian example");
}

#[path = "../examples/eigenprojector.rs"]
mod eigenprojector;

#[test]
fn eigenprojector_runs() {
    eigenprojector::run().expect("eigenprojector example");
}

#[path = "../examples/sign_partition.rs"]
mod sign_partition;

#[test]
fn sign_partition_runs() {
    sign_partition::run().expect("sign_partition example");
}

#[path = "../examples/realify_unitary.rs"]
mod realify_unitary;

#[test]
fn realify_unitary_runs() {
    realify_unitary::run().expect("realify_unitary example");
}

#[path = "../examples/even_parity.rs"]
mod even_parity;

#[test]
fn even_parity_runs() {
    even_parity::run().expect("even_parity example");
}

#[path = "../examples/verification_suites.rs"]
mod verification_suites;

#[test]
fn verification_suites_runs() {
    verification_suites::run().expect("verification_suites example");
}

#[path = "../examples/command_line.rs"]
mod command_line;

#[test]
fn command_line_runs() {
    command_line::run().expect("command_line example");
}
