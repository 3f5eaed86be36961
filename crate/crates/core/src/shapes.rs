//! Ready-made bodies used across tests, examples, and the CLI.

use crate::body::{ConvexBody, LpExponent};
use crate::point::Point;

/// Axis-aligned square [-h, h]^2 as a vertex polytope.
pub fn square(h: f64) -> ConvexBody {
    ConvexBody::vpolytope(vec![
        Point::new2(-h, -h),
        Point::new2(h, -h),
        Point::new2(h, h),
        Point::new2(-h, h),
    ])
    .expect("square is a valid polytope")
}

/// Axis-aligned cube [-h, h]^3 as a vertex polytope.
pub fn cube(h: f64) -> ConvexBody {
    let mut vs = Vec::with_capacity(8);
    for &sx in &[-h, h] {
        for &sy in &[-h, h] {
            for &sz in &[-h, h] {
                vs.push(Point::new3(sx, sy, sz));
            }
        }
    }
    ConvexBody::vpolytope(vs).expect("cube is a valid polytope")
}

/// Regular k-gon with given circumradius, one vertex on the +x axis.
pub fn regular_polygon(k: usize, circumradius: f64) -> ConvexBody {
    assert!(k >= 3, "polygon needs at least 3 vertices");
    let vs = (0..k)
        .map(|j| {
            let a = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
            Point::new2(circumradius * a.cos(), circumradius * a.sin())
        })
        .collect();
    ConvexBody::vpolytope(vs).expect("regular polygon is a valid polytope")
}

/// Equilateral triangle with unit circumradius, one vertex on the +x axis.
pub fn triangle() -> ConvexBody {
    regular_polygon(3, 1.0)
}

/// Triangle on three given vertices.
pub fn triangle_on(a: Point, b: Point, c: Point) -> ConvexBody {
    ConvexBody::vpolytope(vec![a, b, c]).expect("triangle is a valid polytope")
}

/// Regular tetrahedron with vertices on alternating cube corners, edge 2*sqrt(2).
pub fn tetrahedron() -> ConvexBody {
    ConvexBody::vpolytope(vec![
        Point::new3(1.0, 1.0, 1.0),
        Point::new3(1.0, -1.0, -1.0),
        Point::new3(-1.0, 1.0, -1.0),
        Point::new3(-1.0, -1.0, 1.0),
    ])
    .expect("tetrahedron is a valid polytope")
}

/// Regular octahedron = unit l1 ball as a vertex polytope.
pub fn octahedron() -> ConvexBody {
    ConvexBody::vpolytope(vec![
        Point::new3(1.0, 0.0, 0.0),
        Point::new3(-1.0, 0.0, 0.0),
        Point::new3(0.0, 1.0, 0.0),
        Point::new3(0.0, -1.0, 0.0),
        Point::new3(0.0, 0.0, 1.0),
        Point::new3(0.0, 0.0, -1.0),
    ])
    .expect("octahedron is a valid polytope")
}

/// Unit disc (Euclidean ball in the plane).
pub fn disc() -> ConvexBody {
    ConvexBody::lpball(LpExponent::Finite(2.0), 2).expect("disc is valid")
}

/// Unit Euclidean ball in space.
pub fn ball3() -> ConvexBody {
    ConvexBody::lpball(LpExponent::Finite(2.0), 3).expect("ball is valid")
}

/// Unit lp ball in the given dimension.
pub fn lp_ball(p: f64, dim: usize) -> ConvexBody {
    ConvexBody::lpball(LpExponent::new(p).expect("exponent >= 1"), dim).expect("lp ball is valid")
}

/// Standard simplex conv{0, e_1, ..., e_d} in dimension d.
pub fn corner_simplex(dim: usize) -> ConvexBody {
    let mut vs = vec![Point::zero(dim)];
    for i in 0..dim {
        let mut c = [0.0; 3];
        c[i] = 1.0;
        vs.push(Point::from_slice(&c[..dim]));
    }
    ConvexBody::vpolytope(vs).expect("simplex is a valid polytope")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski;

    #[test]
    fn shapes_have_interior_reference() {
        for body in [
            square(1.0),
            cube(1.0),
            triangle(),
            tetrahedron(),
            octahedron(),
            disc(),
            ball3(),
            corner_simplex(2),
            corner_simplex(3),
        ] {
            let g = minkowski::gauge(&body, &body.reference_point()).unwrap();
            assert!(g < 1e-9, "reference must sit at gauge 0, got {g}");
        }
    }

    #[test]
    fn octahedron_matches_l1_ball() {
        let oct = octahedron();
        let l1 = lp_ball(1.0, 3);
        for p in [
            Point::new3(0.2, 0.3, -0.4),
            Point::new3(1.0, 0.0, 0.0),
            Point::new3(0.5, 0.5, 0.5),
        ] {
            let a = minkowski::gauge(&oct, &p).unwrap();
            let b = minkowski::gauge(&l1, &p).unwrap();
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}
