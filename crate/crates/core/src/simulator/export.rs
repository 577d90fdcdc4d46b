use std::fmt::Write;

use super::run::Trajectory;

fn num(out: &mut String, v: f64) {
    let _ = write!(out, ",{v:.16e}");
}

fn header(out: &mut String, first: &str, name: &str, count: usize) {
    out.push_str(first);
    for i in 1..=count {
        let _ = write!(out, ",{name}_{i}");
    }
}

/// One row per recorded point: `t, x_*, xhat_*, mode, u_*`. Modes are 1-based.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let Some(first) = traj.samples.first() else {
        return String::new();
    };
    let (n, m) = (first.x.len(), first.u.len());
    let mut out = String::new();
    header(&mut out, "t", "x", n);
    header(&mut out, "", "xhat", n);
    out.push_str(",mode");
    header(&mut out, "", "u", m);
    out.push('\n');
    for s in &traj.samples {
        let _ = write!(out, "{:.16e}", s.t);
        s.x.iter().chain(&s.xhat).for_each(|v| num(&mut out, *v));
        let _ = write!(out, ",{}", s.mode + 1);
        s.u.iter().for_each(|v| num(&mut out, *v));
        out.push('\n');
    }
    out
}

/// One row per sample: `k, t_k, xstar_*, E_k, box_index, mode, switch_flag`,
/// followed by the update law used and the event.
pub fn quantizer_csv(traj: &Trajectory) -> String {
    let Some(first) = traj.quantizer_log.first() else {
        return String::new();
    };
    let mut out = String::from("k,t_k");
    header(&mut out, "", "xstar", first.xstar.len());
    out.push_str(",E_k,box_index,mode,switch_flag,switched_update,event\n");
    for r in &traj.quantizer_log {
        let _ = write!(out, "{},{:.16e}", r.k, r.t);
        r.xstar.iter().for_each(|v| num(&mut out, *v));
        num(&mut out, r.e);
        let _ = writeln!(
            out,
            ",{},{},{},{},{}",
            r.symbol.box_index,
            r.symbol.mode + 1,
            u8::from(r.switch_flag),
            u8::from(r.switched_update),
            r.event.as_str()
        );
    }
    out
}
