//! One line per criterion. `cargo test --test acceptance -- 3 5` runs a subset; set
//! `MASSEY_HEAVY=1` to add the full enumeration of tilde U_5(F_3).

use massey_core::suite;

fn line(r: &suite::CriterionReport) -> String {
    let mem = r.peak_rss_mb.map(|m| format!(", {m} MB")).unwrap_or_default();
    format!(
        "{} [{:>2}] {} ({:.2}s of {:.0}s{})",
        if r.passed { "PASS" } else { "FAIL" },
        r.id,
        r.title,
        r.seconds,
        r.budget_seconds,
        mem
    )
}

fn main() {
    let picked: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids: Vec<u32> = if picked.is_empty() { (1..=12).collect() } else { picked };
    let mut failed = 0;
    for id in ids {
        match suite::run(id) {
            Ok(r) => {
                println!("{}", line(&r));
                failed += !r.passed as usize;
                if !r.passed || std::env::var("MASSEY_VERBOSE").is_ok() {
                    println!("       {}", r.detail);
                }
            }
            Err(e) => {
                failed += 1;
                println!("FAIL [{id:>2}] {} (error: {e})", suite::TITLES[id as usize - 1]);
            }
        }
    }
    if std::env::var("MASSEY_HEAVY").is_ok_and(|v| v == "1") {
        match suite::heavy_enumeration(|_| {}) {
            Ok(r) => {
                failed += !r.passed as usize;
                println!("{}", line(&r));
            }
            Err(e) => {
                failed += 1;
                println!("FAIL [ 6] tilde U_5(F_3) enumerated by count (error: {e})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
