use std::f64::consts::{FRAC_PI_2, PI};

use conecollar::bers::{random_events, run_ledger, Ledger};
use conecollar::collars::{
    certify_disjoint, collar_metric, cone_collar_width, geodesic_collar_width, optimality_probe,
    Collar,
};
use conecollar::document::SurfaceDocument;
use conecollar::pants::VPiece;
use conecollar::surface::{random_surface, validate_surface, SamplingRanges, Signature};
use conecollar::trig::{
    hexagon_alternate_side, hexagon_opposite_side, Angle, Length, Trirectangle,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn length() -> impl Strategy<Value = f64> {
    (0.05f64.ln()..8f64.ln()).prop_map(f64::exp)
}

fn half_angle() -> impl Strategy<Value = f64> {
    0.02..FRAC_PI_2 - 0.02
}

fn signature() -> impl Strategy<Value = Signature> {
    (0u32..=3, 0u32..=6)
        .prop_filter("admissible", |&(g, n)| Signature::new(g, n).is_ok())
        .prop_map(|(g, n)| Signature::new(g, n).unwrap())
}

proptest! {
    #[test]
    fn trirectangle_relations_hold(a in length(), phi in half_angle()) {
        let t = Trirectangle::from_leg_and_angle(Length::new(a).unwrap(), Angle::new(phi).unwrap());
        prop_assert!(t.is_consistent(1e-10), "{:?}", t.residuals());
    }

    #[test]
    fn hexagon_laws_are_inverse(a in length(), b in length(), gamma in length()) {
        let (la, lb, lg) = (Length::new(a).unwrap(), Length::new(b).unwrap(), Length::new(gamma).unwrap());
        if let Ok(c) = hexagon_opposite_side(la, lb, lg) {
            let back = hexagon_alternate_side(la, lb, Length::new(c).unwrap());
            prop_assert!((back - gamma).abs() <= 1e-8 * gamma.max(1.0));
        }
    }

    #[test]
    fn vpiece_split_adds_up(phi in half_angle(), l1 in length(), l2 in length()) {
        let v = VPiece::new(Angle::new(phi).unwrap(), Length::new(l1).unwrap(), Length::new(l2).unwrap()).unwrap();
        let s = v.split();
        prop_assert!((s.angles[0] + s.angles[1] - phi).abs() < 1e-14);
        // closed form for the seam
        let (a1, a2) = (l1 / 2.0, l2 / 2.0);
        let seam = ((a1.cosh() * a2.cosh() + phi.cos()) / (a1.sinh() * a2.sinh())).acosh();
        prop_assert!((v.seam_length() - seam).abs() < 1e-9 * seam.max(1.0));
    }

    #[test]
    fn collar_areas_integrate(l in length(), phi in half_angle()) {
        let g = Collar::geodesic(0, Length::new(l).unwrap(), phi.cos());
        let c = Collar::cone(0, Angle::new(phi).unwrap());
        for m in [collar_metric(&g), collar_metric(&c)] {
            let exact = m.closed_form_area();
            prop_assert!((m.integrated_area() - exact).abs() <= 1e-10 * exact);
        }
    }

    #[test]
    fn cone_collar_area_below_its_share(phi in half_angle()) {
        // a cone collar is a disk of area 2 phi (cosh v - 1) = 2 phi (1 / sin phi - 1) < 2 pi
        let v = cone_collar_width(Angle::new(phi).unwrap());
        let area = 2.0 * phi * (v.cosh() - 1.0);
        prop_assert!((area - 2.0 * phi * (1.0 / phi.sin() - 1.0)).abs() < 1e-9 * area.max(1.0));
        prop_assert!(area < 2.0 * PI);
    }

    #[test]
    fn geodesic_width_decreases_with_phi_max(l in length(), p in half_angle(), q in half_angle()) {
        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
        prop_assume!(hi - lo > 1e-6);
        let l = Length::new(l).unwrap();
        prop_assert!(geodesic_collar_width(l, Angle::new(lo).unwrap()) > geodesic_collar_width(l, Angle::new(hi).unwrap()));
    }

    #[test]
    fn probe_decreases_in_second_length(phi in half_angle(), l in length(), lp in length(), dl in 0.01f64..2.0) {
        let a = optimality_probe(phi, l, lp).unwrap();
        let b = optimality_probe(phi, l, lp + dl).unwrap();
        prop_assert!(b < a);
    }

    #[test]
    fn random_surfaces_certify(sig in signature(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_surface(sig, &SamplingRanges::default(), &mut rng).unwrap();
        prop_assert!(validate_surface(&s).passed());
        let cert = certify_disjoint(&s).unwrap();
        prop_assert!(cert.passed(), "{:?}", cert.min_margin());
        let doc = SurfaceDocument::from_surface(&s);
        prop_assert_eq!(SurfaceDocument::from_json(&doc.to_json()).unwrap().to_surface().unwrap(), s);
    }

    #[test]
    fn ledgers_are_deterministic_and_bounded(sig in signature(), seed in any::<u64>()) {
        let events = random_events(sig, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let a: Ledger = run_ledger(sig, &events).unwrap();
        let b = run_ledger(sig, &events).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.bounds_hold());
        prop_assert_eq!(a.geodesics.len() as u32, sig.curve_count());
        let bounds: Vec<f64> = a.geodesics.iter().map(|g| g.allowance).collect();
        prop_assert!(bounds.windows(2).all(|w| w[0] <= w[1]));
    }
}
