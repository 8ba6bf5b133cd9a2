package geo;

public interface Measurable {
    double area();
}
