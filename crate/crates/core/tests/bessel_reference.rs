//! Evaluation accuracy against a 40-digit reference table
//! (`data/bessel_reference.csv`, regenerated by `data/gen_reference.py`).

mod common;

use nanodot::bessel::{TOL_ABS, TOL_REL};
use nanodot::{bessel_j, bessel_j_prime, Order};

struct Row {
    nu: f64,
    x: f64,
    j: f64,
    j_prime: f64,
}

fn reference() -> Vec<Row> {
    let text = include_str!("data/bessel_reference.csv");
    text.lines()
        .skip(1)
        .map(|line| {
            let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
            Row {
                nu: f[0],
                x: f[1],
                j: f[2],
                j_prime: f[3],
            }
        })
        .collect()
}

fn allowed(v: f64) -> f64 {
    TOL_ABS.max(TOL_REL * v.abs())
}

#[test]
fn values_match_reference() {
    let rows = reference();
    assert!(rows.len() > 200);
    let mut worst = (0.0, 0.0, 0.0);
    for r in &rows {
        let got = bessel_j(Order::new(r.nu).unwrap(), r.x).unwrap();
        let err = (got.value - r.j).abs();
        assert!(
            err <= allowed(r.j),
            "J_{}({}) = {:e}, reference {:e}",
            r.nu,
            r.x,
            got.value,
            r.j
        );
        assert!(err <= got.abs_error_bound.max(allowed(r.j)));
        if err / allowed(r.j) > worst.0 {
            worst = (err / allowed(r.j), r.nu, r.x);
        }
    }
    println!(
        "worst J error relative to tolerance: {:.3} at nu={}, x={}",
        worst.0, worst.1, worst.2
    );
}

#[test]
fn derivatives_match_reference() {
    for r in reference() {
        let got = bessel_j_prime(Order::new(r.nu).unwrap(), r.x).unwrap();
        assert!(
            (got.value - r.j_prime).abs() <= allowed(r.j_prime),
            "J'_{}({}) = {:e}, reference {:e}",
            r.nu,
            r.x,
            got.value,
            r.j_prime
        );
    }
}

#[test]
fn error_bounds_are_within_module_tolerance() {
    for r in reference() {
        let got = bessel_j(Order::new(r.nu).unwrap(), r.x).unwrap();
        assert!(got.abs_error_bound >= 0.0 && got.abs_error_bound.is_finite());
        assert!(
            got.abs_error_bound <= allowed(got.value),
            "nu={} x={} {:?}",
            r.nu,
            r.x,
            got
        );
    }
}

#[test]
fn integer_orders_match_integral_oracle() {
    let oracle = common::Oracle::new(12);
    for i in 1..=400 {
        let x = 0.25 * i as f64;
        let all = oracle.all(x);
        for (n, want) in all.iter().enumerate() {
            let got = bessel_j(Order::new(n as f64).unwrap(), x).unwrap().value;
            assert!(
                (got - want).abs() < 1e-12,
                "J_{n}({x}) = {got:e}, oracle {want:e}"
            );
        }
    }
}

#[test]
fn first_zero_of_j0() {
    let v = bessel_j(Order::new(0.0).unwrap(), 2.404825557695773)
        .unwrap()
        .value;
    assert!(v.abs() < 1e-12);
    let oracle = common::series(0, 2.404825557695773);
    assert!(oracle.abs() < 1e-12);
}

#[test]
fn first_derivative_zero_of_j1() {
    let v = bessel_j_prime(Order::new(1.0).unwrap(), 1.8411837813406593)
        .unwrap()
        .value;
    assert!(v.abs() < 1e-10);
}
