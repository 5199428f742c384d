public class Point3D extends Point {
    private final int z;

    public Point3D(int x, int y, int z) {
        super(x, y);
        this.z = z;
    }

    @Override
    public boolean equals(Object o) {
        return super.equals(o) && ((Point3D) o).z == z;
    }

    @Override
    public int hashCode() {
        return 31 * super.hashCode() + z;
    }
}
