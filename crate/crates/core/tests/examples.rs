macro_rules! example {
    ($name:ident, $file:literal) => {
        mod $name {
            #![allow(dead_code)]
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(three_qubit, "three_qubit.rs");
example!(certify_lattice, "certify_lattice.rs");
example!(optimal_constant, "optimal_constant.rs");
example!(weight_optimization, "weight_optimization.rs");
example!(baerwinkel_compare, "baerwinkel_compare.rs");
example!(magnon_dispersion, "magnon_dispersion.rs");
example!(export_operator, "export_operator.rs");
example!(edge_list, "edge_list.rs");
example!(asymptotics, "asymptotics.rs");

#[test]
fn examples_run() {
    three_qubit::run_example().unwrap();
    certify_lattice::run_example().unwrap();
    optimal_constant::run_example().unwrap();
    weight_optimization::run_example().unwrap();
    baerwinkel_compare::run_example().unwrap();
    magnon_dispersion::run_example().unwrap();
    export_operator::run_example().unwrap();
    edge_list::run_example().unwrap();
    asymptotics::run_example().unwrap();
}
