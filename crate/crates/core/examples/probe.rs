use dpnfdm_core::grid::{TimeGrid, Units};
use dpnfdm_core::signal::DualPolSignal;
use dpnfdm_core::*;

fn main() {
    let g2 = TimeGrid::centered(25.6, 512, Units::Normalized).unwrap();
    let lg = LambdaGrid::new(&g2, 2.0).unwrap();
    let rho: [Vec<Complex>; 2] = [
        lg.lambdas().iter().map(|&l| Complex::new(0.01, 0.0) * (-l * l / 4.0).exp()).collect(),
        lg.lambdas().iter().map(|&l| Complex::new(0.0, 0.008) * (-l * l / 3.0).exp()).collect(),
    ];
    // manual iteration with trace
    let born = inft::test_born_inverse(&lg);
    let mut q = born.apply(&rho);
    let norm = |r: &[Vec<Complex>; 2]| -> f64 {
        r.iter().flat_map(|v| v.iter()).map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    };
    let tn = norm(&rho);
    for it in 0..12 {
        let back = scatter::continuous_spectrum(&q, lg.lambdas()).unwrap();
        let r: [Vec<Complex>; 2] = [
            back[0].iter().zip(&rho[0]).map(|(a, b)| a - b).collect(),
            back[1].iter().zip(&rho[1]).map(|(a, b)| a - b).collect(),
        ];
        // worst bin
        let mut wi = 0; let mut wv = 0.0;
        for j in 0..2 { for i in 0..lg.len() {
            if r[j][i].norm() > wv { wv = r[j][i].norm(); wi = i; }
        }}
        println!("it {it}: rel res {:.4e}  worst bin {} (lambda {:+.2}) |r| {:.2e}", norm(&r)/tn, wi, lg.lambdas()[wi], wv);
        let corr = born.apply(&r);
        for j in 0..2 {
            for (s, c) in q.pol_mut(j).iter_mut().zip(corr.pol(j)) { *s -= c; }
        }
    }
}
