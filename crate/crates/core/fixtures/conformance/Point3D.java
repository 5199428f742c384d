public class Point3D extends Point {
    private final int z;

    public Point3D(int x, int y, int z) {
        super(x, y);
        this.z = z;
    }

    // Asymmetric: a Point3D never equals a plain Point, but a Point may equal a Point3D.
    @Override
    public boolean equals(Object o) {
        if (!(o instanceof Point3D)) {
            return false;
        }
        Point3D p = (Point3D) o;
        return x == p.x && y == p.y && z == p.z;
    }

    @Override
    public int hashCode() {
        return 31 * super.hashCode() + z;
    }
}
