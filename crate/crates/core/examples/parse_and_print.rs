//! Parses a mission formula, prints it back in normal form, and shows its
//! horizon and the names it mentions. Pass a formula as the first argument
//! to try your own.

use stlplan::stl::parse_formula;

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| {
        "G[0,10] (in(d1,ws) && sep(d1,d2) >= 0.5) && F[2,8] in(d1,goal) && (out(d2,obs) U[0,5] in(d2,goal))".into()
    });
    match parse_formula(&text) {
        Ok(f) => {
            println!("formula: {f}");
            println!("horizon: {} s", f.horizon());
            println!("depth:   {}", f.depth());
            println!("agents:  {}", f.agent_names().join(", "));
            println!("regions: {}", f.region_names().join(", "));
            let again = parse_formula(&f.to_string()).expect("printed form parses");
            assert_eq!(again, f);
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}
