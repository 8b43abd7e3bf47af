pub mod three_points;
