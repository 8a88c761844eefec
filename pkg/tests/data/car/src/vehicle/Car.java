package vehicle;

public @Component("Car") class Car {
    private @Part("rear") Wheel[] rear;

    private @Part("e") Engine e;

    public @AddPart({"rear", "e" })
        @Connects(left="rear",right="e.p",type=Arrow.LEFT)
        Car() { /*...*/ }

    public @AddPart("e") void setEngine(Engine engine) {
        this.e = engine;
    }
}
