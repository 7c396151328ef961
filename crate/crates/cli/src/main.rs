//! heegcert: check the hypotheses of the anticyclotomic Heegner-point
//! theorems for a triple (E, K, p) and emit a JSON certificate.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use heegcert_core::certifier::{batch_certify, certify, CertificationRequest, DEFAULT_DEPTH, DEFAULT_PREC, DEFAULT_SCAN_BOUND};
use heegcert_core::cohomology::{filtration_check, h_groups_with, matrix_group, theorem_5_16_check, CohomologyOptions, FiltrationGroup};
use heegcert_core::elliptic::{a_p, c_tam, count_points, CurveQ};
use heegcert_core::finite_gl2::{classify_subgroup, k_exceptional, list_k_exceptional, FiniteField, Mat2};
use heegcert_core::galois_image::{frobenius_scan, verdict_from_table};
use heegcert_core::heegner::{heegner_trace, p_divisibility_test, Uniformization};
use heegcert_core::linalg::{Matrix, ModRing};
use heegcert_core::quadfield::{build_field, genus_decomposition, heegner_forms, heegner_forms_of_conductor, ring_class_degrees, smallest_beta};

/// Usage errors; `2` is reserved for a not-certified verdict.
const EXIT_USAGE: u8 = 64;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "heegcert",
    version,
    about = "Certify anticyclotomic Heegner-point hypotheses for (E, K, p)",
    after_help = "EXAMPLES:\n\
                  \n  heegcert certify --curve 0,0,1,-1,0 --disc -7 --prime 5\
                  \n  heegcert heegner --curve 0,0,1,-1,0 --disc -7 --test-div 5\
                  \n  heegcert classgroup --disc -23\
                  \n  heegcert k-exceptional --p 7 --f 2 --bound 50\
                  \n  heegcert certify-batch --input curves.csv --out-dir certs"
)]
struct Cli {
    /// Compact JSON instead of pretty-printed
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Odd n for which some power of p is +-2 mod n
    KExceptional {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: u32,
        #[arg(long, default_value_t = 50)]
        bound: u64,
        /// Test a single n and print its witness
        #[arg(long)]
        n: Option<u64>,
    },
    /// Classify the subgroup of GL_2(F_{p^f}) generated by matrices
    #[command(after_help = "Matrices are separated by ';', entries by ','. For f > 1 an entry\n\
                            n < p^f stands for the element whose coefficients are the base-p digits of n.")]
    Classify {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: u32,
        #[arg(long, allow_hyphen_values = true)]
        gens: String,
        /// Also run the invariant-Hom vanishing check
        #[arg(long)]
        hom_check: bool,
    },
    /// H^0, H^1 (and H^2) of a matrix group on its natural module
    #[command(after_help = "The group file lists one generator per line as dim*dim integers,\n\
                            row-major, separated by spaces or commas. '#' starts a comment.\n\
                            With --filtration n the generators are 2x2 matrices mod p^n.")]
    Cohomology {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        group_file: PathBuf,
        #[arg(long, default_value_t = 2)]
        module_dim: usize,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        max_degree: u8,
        /// Work in GL_2(Z/p^n) with the congruence filtration
        #[arg(long)]
        filtration: Option<u32>,
        /// Target m for the filtration criterion (defaults to n)
        #[arg(long)]
        target: Option<u32>,
        /// Skip the coprime-order and Sah shortcuts
        #[arg(long)]
        brute_force: bool,
        /// Include cocycles spanning H^1
        #[arg(long)]
        basis: bool,
    },
    /// a_p and #E(F_p)
    Ap {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        p: u64,
    },
    /// Tate's algorithm at one prime
    Tate {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        l: u64,
    },
    /// Conductor, minimal model and Tamagawa numbers
    Conductor {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
    },
    /// Reduced forms, class number and u_K
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        /// Also report the ring class degrees at p
        #[arg(long)]
        p: Option<u64>,
    },
    /// Prime discriminant factors and the genus field
    Genus {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Forms (a,b,c) with N | a and b = beta mod 2N, one per class
    HeegnerForms {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        level: u64,
        #[arg(long, default_value_t = 1)]
        conductor: u64,
    },
    /// Frobenius scan and irreducibility certificate for E[p]
    GaloisImage {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_SCAN_BOUND)]
        bound: u64,
        /// Include the per-prime table
        #[arg(long)]
        table: bool,
    },
    /// Heegner trace y_K or y_{K,m}, exact over K
    Heegner {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, default_value_t = 1)]
        conductor: u64,
        #[arg(long, default_value_t = DEFAULT_PREC)]
        prec: u32,
        /// Test divisibility of the trace by p over K
        #[arg(long)]
        test_div: Option<u64>,
    },
    /// Full hypothesis check and certificate (exit 0 certified, 2 not, 3 error)
    Certify {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = DEFAULT_PREC)]
        prec: u32,
        #[arg(long, default_value_t = DEFAULT_SCAN_BOUND)]
        scan_bound: u64,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
        /// Take rk E(K) = 1 and Sha(E/K)[p^inf] = 0 as given
        #[arg(long)]
        assert_rank_one_sha_trivial: bool,
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify every row of a CSV file (label, a1..a6, disc, prime)
    CertifyBatch {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PREC)]
        prec: u32,
        #[arg(long, default_value_t = DEFAULT_SCAN_BOUND)]
        scan_bound: u64,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
    },
}

fn curve(s: &str) -> Result<CurveQ> {
    CurveQ::parse(s).with_context(|| format!("bad curve {s:?}"))
}

fn ints(s: &str) -> Result<Vec<i64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().with_context(|| format!("not an integer: {t:?}")))
        .collect()
}

fn parse_gens(k: &FiniteField, s: &str) -> Result<Vec<Mat2>> {
    let mut out = Vec::new();
    for part in s.split(';').filter(|t| !t.trim().is_empty()) {
        let e = ints(part)?;
        if e.len() != 4 {
            bail!("a generator needs four entries, got {}", e.len());
        }
        let q = k.size() as i64;
        if k.degree() > 1 && e.iter().any(|&x| x < 0 || x >= q) {
            bail!("entries must lie in 0..{q} for f > 1");
        }
        let el = |x: i64| if k.degree() == 1 { k.from_int(x) } else { x as u32 };
        out.push(Mat2::new(el(e[0]), el(e[1]), el(e[2]), el(e[3])));
    }
    if out.is_empty() {
        bail!("no generators given");
    }
    Ok(out)
}

fn read_group_file(path: &Path, entries: usize) -> Result<Vec<Vec<i64>>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v = ints(line).with_context(|| format!("line {}", i + 1))?;
        if v.len() != entries {
            bail!("line {}: expected {entries} entries, got {}", i + 1, v.len());
        }
        out.push(v);
    }
    if out.is_empty() {
        bail!("{} lists no generators", path.display());
    }
    Ok(out)
}

fn write_json(path: &Path, v: &str) -> Result<()> {
    fs::write(path, format!("{v}\n")).with_context(|| format!("writing {}", path.display()))
}

fn safe_name(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

/// Runs one subcommand; returns its JSON output and exit code.
fn run(cmd: Command) -> Result<(Value, u8)> {
    let v = match cmd {
        Command::KExceptional { p, f, bound, n } => match n {
            Some(n) => json!(k_exceptional(n, p, f)?),
            None => json!(list_k_exceptional(p, f, bound)?),
        },
        Command::Classify { p, f, gens, hom_check } => {
            let k = FiniteField::build(p, f)?;
            let gens = parse_gens(&k, &gens)?;
            let class = classify_subgroup(&gens, &k)?;
            if hom_check {
                json!({"classification": class, "hom_check": theorem_5_16_check(&k, &gens)?})
            } else {
                json!(class)
            }
        }
        Command::Cohomology { p, group_file, module_dim, max_degree, filtration, target, brute_force, basis } => {
            match filtration {
                Some(n) => {
                    let gens: Vec<[i64; 4]> =
                        read_group_file(&group_file, 4)?.into_iter().map(|v| [v[0], v[1], v[2], v[3]]).collect();
                    let g = FiltrationGroup::generated(p, n, &gens)?;
                    json!({"order": g.order(), "check": filtration_check(&g, n, target.unwrap_or(n))?})
                }
                None => {
                    let ring = ModRing::field(p);
                    let gens: Vec<Matrix> = read_group_file(&group_file, module_dim * module_dim)?
                        .into_iter()
                        .map(|v| {
                            let rows: Vec<Vec<u64>> = v.chunks(module_dim).map(|r| r.iter().map(|&x| ring.reduce(x)).collect()).collect();
                            Matrix::from_rows(&rows)
                        })
                        .collect();
                    let (g, m) = matrix_group(ring, module_dim, &gens, 100_000)?;
                    let opts = CohomologyOptions { max_degree, fast_paths: !brute_force, basis };
                    json!({"order": g.order(), "module_dim": module_dim, "report": h_groups_with(&g, &m, opts)?})
                }
            }
        }
        Command::Ap { curve: c, p } => {
            let e = curve(&c)?;
            if e.has_good_reduction(p) {
                json!(count_points(&e, p)?)
            } else {
                json!({"p": p, "a_p": a_p(&e, p)?, "reduction": e.local_data(p)?})
            }
        }
        Command::Tate { curve: c, l } => json!(curve(&c)?.local_data(l)?),
        Command::Conductor { curve: c } => {
            let e = curve(&c)?;
            let model: Vec<String> = e.ainvs().iter().map(|a| a.to_string()).collect();
            json!({
                "conductor": e.conductor().to_string(),
                "minimal_model": model,
                "input_minimal": e.input_minimal(),
                "discriminant": e.discriminant().to_string(),
                "local": e.local_data_all(),
                "c_tam": c_tam(&e),
            })
        }
        Command::Classgroup { disc, p } => {
            let f = build_field(disc)?;
            match p {
                Some(p) => json!({"field": f, "ring_class_degrees": ring_class_degrees(&f, p)}),
                None => json!(f),
            }
        }
        Command::Genus { disc } => json!(genus_decomposition(&build_field(disc)?)),
        Command::HeegnerForms { disc, level, conductor } => {
            let f = build_field(disc)?;
            if conductor == 1 {
                json!(heegner_forms(&f, level)?)
            } else {
                let beta = smallest_beta(disc, level).context("D_K has no square root mod 4N")?;
                json!(heegner_forms_of_conductor(&f, level, conductor, beta)?)
            }
        }
        Command::GaloisImage { curve: c, p, bound, table } => {
            let t = frobenius_scan(&curve(&c)?, p, bound)?;
            let report = verdict_from_table(&t);
            if table {
                json!({"report": report, "table": t})
            } else {
                json!(report)
            }
        }
        Command::Heegner { curve: c, disc, conductor, prec, test_div } => {
            let e = curve(&c)?;
            let f = build_field(disc)?;
            let r = heegner_trace(&e, &f, conductor, prec)?;
            match test_div {
                Some(p) => {
                    let u = Uniformization::new(&e, r.prec)?;
                    json!({"trace": r, "divisibility": p_divisibility_test(&u, &r, p)?})
                }
                None => json!(r),
            }
        }
        Command::Certify { curve: c, disc, prime, prec, scan_bound, depth, assert_rank_one_sha_trivial, label, out } => {
            curve(&c)?;
            let coeffs = c.split(',').map(|t| t.trim().parse()).collect::<Result<Vec<BigInt>, _>>()?;
            let req = CertificationRequest {
                label,
                curve: coeffs,
                disc,
                prime,
                prec,
                scan_bound,
                depth,
                assert_rank_one_sha_trivial,
            };
            let cert = certify(&req)?;
            let code = cert.verdict.exit_code() as u8;
            if let Some(path) = out {
                write_json(&path, &cert.to_json())?;
            }
            return Ok((serde_json::to_value(&cert)?, code));
        }
        Command::CertifyBatch { input, out_dir, prec, scan_bound, depth } => {
            let file = fs::File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let mut base = CertificationRequest::new([0; 5], -7, 3);
            base.prec = prec;
            base.scan_bound = scan_bound;
            base.depth = depth;
            let report = batch_certify(file, &base)?;
            fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            for (row, cert) in &report.certificates {
                let name = cert.request.label.as_deref().map(safe_name).unwrap_or_else(|| "row".into());
                write_json(&out_dir.join(format!("{row:04}-{name}.json")), &cert.to_json())?;
            }
            let summary = serde_json::to_string_pretty(&report.summary)?;
            write_json(&out_dir.join("summary.json"), &summary)?;
            return Ok((serde_json::to_value(&report.summary)?, report.exit_code() as u8));
        }
    };
    Ok((v, 0))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((v, code)) => {
            let text = if cli.compact { serde_json::to_string(&v) } else { serde_json::to_string_pretty(&v) };
            println!("{}", text.expect("json"));
            ExitCode::from(code)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
