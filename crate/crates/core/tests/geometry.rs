use proptest::prelude::*;
use udvg::geometry::*;

fn p(x: &str, y: &str) -> Point {
    Point::parse(x, y).unwrap()
}

fn seg(a: (i64, i64), b: (i64, i64)) -> Segment {
    Segment::new(Point::from_ints(a.0, a.1), Point::from_ints(b.0, b.1)).unwrap()
}

#[test]
fn orientation_examples() {
    assert_eq!(orientation(&p("0", "0"), &p("1", "0"), &p("0", "1")), Orientation::CounterClockwise);
    assert_eq!(orientation(&p("0", "0"), &p("1", "1"), &p("2", "2")), Orientation::Collinear);
    // (1,0) x (2,-1/10) = 1 * (-1/10) - 0 * 2 < 0
    assert_eq!(orientation(&p("0", "0"), &p("1", "0"), &p("2", "-1/10")), Orientation::Clockwise);
}

#[test]
fn distance_examples() {
    assert_eq!(sq_dist(&p("0", "0"), &p("3", "4")), int(25));
    assert_eq!(sq_dist(&p("0", "0"), &p("0", "0")), int(0));
    assert_eq!(sq_dist(&p("0", "2.1"), &p("0.6", "2.9")), int(1));
    assert!(within_unit(&p("0", "0"), &p("1", "0"), ThresholdPolicy::Closed));
    assert!(!within_unit(&p("0", "0"), &p("1", "0"), ThresholdPolicy::Strict));
    for policy in [ThresholdPolicy::Closed, ThresholdPolicy::Strict] {
        assert!(within_unit(&p("0", "0"), &p("1/2", "1/2"), policy));
    }
    assert_eq!(ThresholdPolicy::default(), ThresholdPolicy::Closed);
}

#[test]
fn intersection_examples() {
    assert_eq!(segments_intersect(&seg((0, 0), (2, 0)), &seg((1, -1), (1, 1))), Intersection::ProperCross);
    assert_eq!(
        segments_intersect(&seg((0, 0), (1, 0)), &seg((1, 0), (2, 0))),
        Intersection::PointTouch(Point::from_ints(1, 0))
    );
    assert_eq!(segments_intersect(&seg((0, 0), (2, 0)), &seg((1, 0), (3, 0))), Intersection::CollinearOverlap);
    assert_eq!(segments_intersect(&seg((0, 0), (1, 0)), &seg((0, 1), (1, 1))), Intersection::Empty);
    assert_eq!(
        segments_intersect(&seg((0, 0), (2, 0)), &seg((1, 0), (1, 1))),
        Intersection::PointTouch(Point::from_ints(1, 0))
    );
}

#[test]
fn point_location_examples() {
    let sq = Polygon::new(vec![p("0", "0"), p("1", "0"), p("1", "1"), p("0", "1")], vec![]).unwrap();
    assert_eq!(point_in_polygon(&p("1/2", "1/2"), &sq), Location::StrictInterior);
    assert_eq!(point_in_polygon(&p("1", "0"), &sq), Location::OnBoundary);
    assert_eq!(point_in_polygon(&p("1", "1/3"), &sq), Location::OnBoundary);
    assert_eq!(point_in_polygon(&p("2", "1/2"), &sq), Location::Exterior);

    let outer = vec![p("0", "0"), p("4", "0"), p("4", "4"), p("0", "4")];
    let hole = vec![p("1", "1"), p("1", "3"), p("3", "3"), p("3", "1")];
    let ring = Polygon::new(outer, vec![hole]).unwrap();
    assert_eq!(point_in_polygon(&p("2", "2"), &ring), Location::Exterior);
    assert_eq!(point_in_polygon(&p("1", "2"), &ring), Location::OnBoundary);
    assert_eq!(point_in_polygon(&p("1/2", "2"), &ring), Location::StrictInterior);
}

#[test]
fn invalid_polygons_are_rejected() {
    let two = vec![p("0", "0"), p("1", "0")];
    assert!(Polygon::new(two, vec![]).is_err());
    let repeated = vec![p("0", "0"), p("1", "0"), p("1", "1"), p("1", "0")];
    assert!(Polygon::new(repeated, vec![]).is_err());
    let outer = vec![p("0", "0"), p("4", "0"), p("4", "4"), p("0", "4")];
    let a = vec![p("1", "1"), p("2", "1"), p("2", "2")];
    let b = vec![p("2", "1"), p("3", "1"), p("3", "2")];
    assert!(Polygon::new(outer, vec![a, b]).is_err());
}

fn coord() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn point() -> impl Strategy<Value = Point> {
    (coord(), coord()).prop_map(|(x, y)| Point::new(x, y))
}

fn flip(o: Orientation) -> Orientation {
    match o {
        Orientation::Clockwise => Orientation::CounterClockwise,
        Orientation::CounterClockwise => Orientation::Clockwise,
        Orientation::Collinear => Orientation::Collinear,
    }
}

fn f(p: &Point) -> (f64, f64) {
    (to_f64(&p.x), to_f64(&p.y))
}

fn cross_f64(a: &Point, b: &Point, c: &Point) -> f64 {
    let ((ax, ay), (bx, by), (cx, cy)) = (f(a), f(b), f(c));
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

proptest! {
    #[test]
    fn orientation_is_antisymmetric_and_translation_invariant(a in point(), b in point(), c in point(), dx in coord(), dy in coord()) {
        let o = orientation(&a, &b, &c);
        prop_assert_eq!(orientation(&a, &c, &b), flip(o));
        let t = |q: &Point| q.translate(&dx, &dy);
        prop_assert_eq!(orientation(&t(&a), &t(&b), &t(&c)), o);
    }

    #[test]
    fn distance_is_symmetric_and_definite(a in point(), b in point()) {
        prop_assert_eq!(sq_dist(&a, &b), sq_dist(&b, &a));
        prop_assert_eq!(sq_dist(&a, &b) == int(0), a == b);
        if within_unit(&a, &b, ThresholdPolicy::Strict) {
            prop_assert!(within_unit(&a, &b, ThresholdPolicy::Closed));
        }
    }

    #[test]
    fn intersection_is_symmetric(a in point(), b in point(), c in point(), d in point()) {
        prop_assume!(a != b && c != d);
        let s = Segment::new(a, b).unwrap();
        let t = Segment::new(c, d).unwrap();
        prop_assert_eq!(segments_intersect(&s, &t), segments_intersect(&t, &s));
    }

    #[test]
    fn predicates_match_floats_away_from_degeneracy(a in point(), b in point(), c in point(), d in point()) {
        let x = cross_f64(&a, &b, &c);
        if x.abs() > 1e-6 {
            let want = if x > 0.0 { Orientation::CounterClockwise } else { Orientation::Clockwise };
            prop_assert_eq!(orientation(&a, &b, &c), want);
        }
        let ((ax, ay), (bx, by)) = (f(&a), f(&b));
        let d2 = (ax - bx).powi(2) + (ay - by).powi(2);
        if (d2 - 1.0).abs() > 1e-6 {
            prop_assert_eq!(within_unit(&a, &b, ThresholdPolicy::Closed), d2 < 1.0);
        }
        let o = [cross_f64(&a, &b, &c), cross_f64(&a, &b, &d), cross_f64(&c, &d, &a), cross_f64(&c, &d, &b)];
        if a != b && c != d && o.iter().all(|v| v.abs() > 1e-6) {
            let crosses = o[0].signum() != o[1].signum() && o[2].signum() != o[3].signum();
            let got = segments_intersect(&Segment::new(a, b).unwrap(), &Segment::new(c, d).unwrap());
            prop_assert_eq!(got == Intersection::ProperCross, crosses);
            prop_assert!(crosses || got == Intersection::Empty);
        }
    }
}
