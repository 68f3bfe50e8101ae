use suprem_core::frame::{build_peg_frame, FrameParams};
fn main() {
    for seed in [42u64, 7, 1, 99] {
        let f = build_peg_frame(FrameParams::new(500, 1000, 3, 6, seed).unwrap()).unwrap();
        let rep = f.validate();
        println!("seed {seed}: girth {:?} forced4 {}", rep.girth, f.meta().four_cycle_forced);
    }
    // count how many 4-cycles exist: pairs of checks sharing >= 2 vars
    let f = build_peg_frame(FrameParams::new(500, 1000, 3, 6, 42).unwrap()).unwrap();
    let mut pairs = std::collections::HashMap::new();
    for j in 0..f.n_vars() {
        let cs = f.var_checks(j);
        for a in 0..cs.len() { for b in a+1..cs.len() {
            *pairs.entry((cs[a], cs[b])).or_insert(0) += 1;
        }}
    }
    let bad: Vec<_> = pairs.iter().filter(|(_, &c)| c >= 2).collect();
    println!("check pairs sharing >=2 vars: {}", bad.len());
}
