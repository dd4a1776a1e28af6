//! Concurrence of pure states, of their projectors through the Wootters
//! formula, and of the MEMS family, whose concurrence equals its parameter.

use qspeed::families::MemsState;
use qspeed::states::{
    concurrence_from_reduction, concurrence_mixed, concurrence_pure, PureState2Q,
};

fn main() {
    let bell = PureState2Q::bell();
    let product = PureState2Q::basis(0);
    let partial = PureState2Q::from_real([0.8, 0.0, 0.0, 0.6]).unwrap();
    for (name, psi) in [
        ("Bell", bell),
        ("|00⟩", product),
        ("0.8|00⟩ + 0.6|11⟩", partial),
    ] {
        println!(
            "{name:>18}: 2|c0c3 - c1c2| = {:.6}, reduced state = {:.6}, Wootters = {:.6}",
            concurrence_pure(&psi),
            concurrence_from_reduction(&psi),
            concurrence_mixed(&psi.projector()).unwrap()
        );
    }
    for x in [0.1, 0.5, 2.0 / 3.0, 0.9, 1.0] {
        let m = MemsState::new(x).unwrap();
        println!(
            "MEMS x = {x:.4}: C = {:.12}",
            concurrence_mixed(&m.density()).unwrap()
        );
    }
}
