//! Semi-Markov switching with Weibull and uniform sojourns: empirical
//! sojourn means against closed forms, and the certificate weights next to
//! those of a Markov law with the same mean holding times.

use mjls::certificate::{weights_markov, weights_semimarkov};
use mjls::mathkit::Matrix;
use mjls::switching::{MarkovLaw, SemiMarkovLaw, SojournDistribution as D};

fn main() {
    let jump = Matrix::from_rows(&[[0.0, 0.5, 0.5], [1.0, 0.0, 0.0], [0.25, 0.75, 0.0]]).unwrap();
    let table = vec![
        vec![
            None,
            Some(D::Weibull {
                shape: 2.0,
                scale: 3.0,
            }),
            Some(D::Weibull {
                shape: 0.8,
                scale: 2.0,
            }),
        ],
        vec![Some(D::Uniform { lo: 0.5, hi: 1.5 }), None, None],
        vec![
            Some(D::Exponential { rate: 0.5 }),
            Some(D::Uniform { lo: 1.0, hi: 4.0 }),
            None,
        ],
    ];
    let law = SemiMarkovLaw::new(jump.clone(), table).unwrap();

    let path = mjls::switching::sample_path_semimarkov(&law, 200_000.0, 11, 0).unwrap();
    let sojourns = path.sojourns_by_mode(3);
    for (p, s) in sojourns.iter().enumerate() {
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        println!(
            "mode {}: {:6} sojourns, mean {:.4} (closed form {:.4})",
            p + 1,
            s.len(),
            mean,
            law.mean_sojourn(p)
        );
    }

    // A Markov law with the same embedded chain and mean holding times.
    let mut g = Matrix::zeros(3, 3);
    for p in 0..3 {
        let rate = 1.0 / law.mean_sojourn(p);
        for q in 0..3 {
            g[(p, q)] = if p == q { -rate } else { rate * jump[(p, q)] };
        }
    }
    let markov = MarkovLaw::new(g).unwrap();

    let tau = 0.1;
    let ws = weights_semimarkov(&law, tau).unwrap();
    let wm = weights_markov(&markov, tau);
    println!("\n      semi-Markov p_nu/p_ups/p_mu    Markov p_nu/p_ups/p_mu");
    for p in 0..3 {
        println!(
            "mode {}  {:.5} {:.5} {:.5}    {:.5} {:.5} {:.5}",
            p + 1,
            ws.p_nu[p],
            ws.p_upsilon[p],
            ws.p_mu[p],
            wm.p_nu[p],
            wm.p_upsilon[p],
            wm.p_mu[p]
        );
    }
}
