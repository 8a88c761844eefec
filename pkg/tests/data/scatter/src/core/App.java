package core;

public @Component("App") class App {
    public @Port("run") void run() {
    }
}
